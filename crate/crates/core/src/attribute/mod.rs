//! Image-service data model: the non-functional attributes of one image,
//! grouped as spatial, temporal, contextual and intrinsic, plus the raw tag
//! map they were parsed from.

mod pair;
mod parse;
pub mod tags;
mod time;
mod validate;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use pair::{pair_records, PairingReport, PairingRule};
pub use parse::{parse_sidecar, SidecarFormat};
pub use time::TimePoint;
pub use validate::{intrinsic_consistency_lint, validate, Finding, Violation, DEFAULT_LINT_TOLERANCE};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SpatialAttributes {
    pub gps_latitude: Option<f64>,
    pub gps_longitude: Option<f64>,
    pub gps_satellite: Option<String>,
    pub city: Option<String>,
    pub country: Option<String>,
    pub state: Option<String>,
    pub location: Option<String>,
}

impl SpatialAttributes {
    /// Both coordinates, when the pair is complete.
    pub fn gps(&self) -> Option<(f64, f64)> {
        Some((self.gps_latitude?, self.gps_longitude?))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TemporalAttributes {
    pub datetime_original: Option<TimePoint>,
    pub date_digitized: Option<TimePoint>,
    pub gps_timestamp: Option<TimePoint>,
    pub gps_datestamp: Option<TimePoint>,
    pub timezone_offset: Option<i32>,
}

impl TemporalAttributes {
    /// True when any present capture time lacks a known UTC offset.
    pub fn is_naive(&self) -> bool {
        [&self.datetime_original, &self.date_digitized]
            .into_iter()
            .flatten()
            .any(|t| t.utc_offset_minutes.is_none())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ContextualAttributes {
    pub title: Option<String>,
    pub caption: Option<String>,
    pub content_description: Option<String>,
    pub headline: Option<String>,
    pub image_description: Option<String>,
    pub instructions: Option<String>,
    pub weather_profile: Option<String>,
    pub keywords: Vec<String>,
    pub semantic_names: Vec<String>,
}

impl ContextualAttributes {
    /// All contextual text in canonical order, for tokenization.
    pub fn texts(&self) -> impl Iterator<Item = &str> {
        [
            &self.title,
            &self.caption,
            &self.content_description,
            &self.headline,
            &self.image_description,
            &self.instructions,
            &self.weather_profile,
        ]
        .into_iter()
        .flatten()
        .map(String::as_str)
        .chain(self.keywords.iter().map(String::as_str))
        .chain(self.semantic_names.iter().map(String::as_str))
    }

    pub fn is_empty(&self) -> bool {
        self.texts().all(|t| t.trim().is_empty())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WhiteBalance {
    Auto,
    Manual,
    #[default]
    Unknown,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IntrinsicAttributes {
    pub resolution: Option<(u32, u32)>,
    pub white_balance: WhiteBalance,
    pub subject_distance: Option<f64>,
    pub camera_elevation_angle: Option<f64>,
    /// Reciprocal rate in 1/s: a "1/200" shutter is stored as 200.
    pub shutter_speed: Option<f64>,
    /// Seconds.
    pub exposure_time: Option<f64>,
    pub coverage: Option<String>,
}

/// One image abstracted as a service: grouped non-functional attributes and
/// the raw tags they came from. Every canonical tag that was parsed is still
/// present in `raw_tags`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageServiceRecord {
    pub id: String,
    pub spatial: SpatialAttributes,
    pub temporal: TemporalAttributes,
    pub contextual: ContextualAttributes,
    pub intrinsic: IntrinsicAttributes,
    pub raw_tags: BTreeMap<String, String>,
}

impl ImageServiceRecord {
    /// Builds a record from a tag map (the `id` key may or may not be in it).
    pub fn from_tags(id: impl Into<String>, tags: BTreeMap<String, String>) -> crate::Result<Self> {
        parse::from_tag_map(id.into(), tags)
    }

    /// Returns a copy with `tag` set (or removed when `value` is `None`),
    /// re-parsed so grouped attributes stay in sync with `raw_tags`.
    pub fn with_tag(&self, tag: &str, value: Option<String>) -> crate::Result<Self> {
        let mut tags = self.raw_tags.clone();
        match value {
            Some(v) => tags.insert(tag.to_string(), v),
            None => tags.remove(tag),
        };
        Self::from_tags(self.id.clone(), tags)
    }

    pub fn with_tags<I>(&self, id: impl Into<String>, updates: I) -> crate::Result<Self>
    where
        I: IntoIterator<Item = (String, Option<String>)>,
    {
        let mut tags = self.raw_tags.clone();
        for (tag, value) in updates {
            match value {
                Some(v) => tags.insert(tag, v),
                None => tags.remove(&tag),
            };
        }
        Self::from_tags(id, tags)
    }

    /// JSON sidecar with lexicographically sorted keys.
    pub fn to_sidecar_json(&self) -> String {
        parse::to_json(self)
    }

    /// A single flat JSON object (used for JSON-lines corpora).
    pub fn to_json_value(&self) -> serde_json::Value {
        parse::to_json_value(self)
    }

    /// Header and value rows for the CSV sidecar form.
    pub fn to_csv_row(&self) -> (Vec<String>, Vec<String>) {
        parse::to_csv(self)
    }
}

/// An original record and a candidate that claims to be the same image.
#[derive(Debug, Clone, PartialEq)]
pub struct ServicePair {
    pub original: ImageServiceRecord,
    pub candidate: ImageServiceRecord,
}

impl ServicePair {
    pub fn new(original: ImageServiceRecord, candidate: ImageServiceRecord) -> crate::Result<Self> {
        if original.id == candidate.id {
            return Err(crate::Error::InvalidConfig(format!(
                "pair shares id `{}` on both sides",
                original.id
            )));
        }
        Ok(Self {
            original,
            candidate,
        })
    }
}
