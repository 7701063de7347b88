//! Quantitative deltas between an original and a candidate record:
//! Manhattan distance over time components, haversine distance over GPS
//! coordinates and Jaccard overlap of contextual tokens.

mod normalize;
mod tokenize;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::attribute::{ImageServiceRecord, TimePoint};
use crate::{Error, Result};

pub use normalize::{normalize_deltas, NormalizationBounds, NormalizationMode, NormalizedDelta};
pub use tokenize::{token_set, tokenize, tokenize_all};

/// Mean earth radius in km.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// Where a channel's delta came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Quantitative,
    Semantic,
    Missing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Spatial,
    Temporal,
    Contextual,
}

impl Channel {
    pub const ALL: [Channel; 3] = [Channel::Spatial, Channel::Temporal, Channel::Contextual];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Channel::Spatial => "spatial",
            Channel::Temporal => "temporal",
            Channel::Contextual => "contextual",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelDelta {
    pub value: f64,
    pub provenance: Provenance,
}

impl ChannelDelta {
    pub fn quantitative(value: f64) -> Self {
        Self {
            value,
            provenance: Provenance::Quantitative,
        }
    }

    pub fn semantic(value: f64) -> Self {
        Self {
            value,
            provenance: Provenance::Semantic,
        }
    }

    /// A missing channel contributes zero change.
    pub fn missing() -> Self {
        Self {
            value: 0.0,
            provenance: Provenance::Missing,
        }
    }
}

/// Raw per-channel change between two records. Spatial is km (quantitative)
/// or a semantic distance, temporal is Manhattan units, contextual is
/// 1 - Jaccard or a semantic distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaVector {
    pub spatial: ChannelDelta,
    pub temporal: ChannelDelta,
    pub contextual: ChannelDelta,
}

impl DeltaVector {
    pub fn get(&self, channel: Channel) -> ChannelDelta {
        match channel {
            Channel::Spatial => self.spatial,
            Channel::Temporal => self.temporal,
            Channel::Contextual => self.contextual,
        }
    }

    pub fn values(&self) -> [f64; 3] {
        [self.spatial.value, self.temporal.value, self.contextual.value]
    }

    pub fn provenance(&self) -> [Provenance; 3] {
        [
            self.spatial.provenance,
            self.temporal.provenance,
            self.contextual.provenance,
        ]
    }

    pub fn zero() -> Self {
        Self {
            spatial: ChannelDelta::quantitative(0.0),
            temporal: ChannelDelta::quantitative(0.0),
            contextual: ChannelDelta::quantitative(0.0),
        }
    }
}

/// Sum of absolute component differences over (year, month, day, hour,
/// minute, second).
pub fn temporal_manhattan(a: &TimePoint, b: &TimePoint) -> f64 {
    a.components()
        .iter()
        .zip(b.components().iter())
        .map(|(x, y)| (x - y).abs())
        .sum::<i64>() as f64
}

/// Great-circle distance in km between two (lat, lon) pairs in degrees.
pub fn haversine_km(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (phi1, phi2) = (a.0.to_radians(), b.0.to_radians());
    let d_phi = (b.0 - a.0).to_radians();
    let d_lambda = (b.1 - a.1).to_radians();
    let h = (d_phi / 2.0).sin().powi(2) + phi1.cos() * phi2.cos() * (d_lambda / 2.0).sin().powi(2);
    // rounding can push h a hair outside [0, 1]
    let h = h.clamp(0.0, 1.0);
    let c = 2.0 * h.sqrt().atan2((1.0 - h).sqrt());
    EARTH_RADIUS_KM * c
}

/// |A ∩ B| / |A ∪ B|; two empty sets count as identical.
pub fn contextual_jaccard<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    inter as f64 / union as f64
}

pub fn contextual_distance<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    1.0 - contextual_jaccard(a, b)
}

/// The time point feeding the temporal delta: the first of
/// DateTimeOriginal, DateTimeDigitized, GPSTimeStamp present on both sides.
pub fn temporal_sources(a: &ImageServiceRecord, b: &ImageServiceRecord) -> Option<(TimePoint, TimePoint)> {
    let (ta, tb) = (&a.temporal, &b.temporal);
    [
        (ta.datetime_original, tb.datetime_original),
        (ta.date_digitized, tb.date_digitized),
        (ta.gps_timestamp, tb.gps_timestamp),
    ]
    .into_iter()
    .find_map(|pair| match pair {
        (Some(x), Some(y)) => Some((x, y)),
        _ => None,
    })
}

pub fn contextual_tokens(record: &ImageServiceRecord) -> BTreeSet<String> {
    token_set(record.contextual.texts())
}

pub fn spatial_delta(a: &ImageServiceRecord, b: &ImageServiceRecord) -> Result<f64> {
    match (a.spatial.gps(), b.spatial.gps()) {
        (Some(p), Some(q)) => Ok(haversine_km(p, q)),
        _ => Err(Error::MissingChannel("spatial")),
    }
}

pub fn temporal_delta(a: &ImageServiceRecord, b: &ImageServiceRecord) -> Result<f64> {
    temporal_sources(a, b)
        .map(|(x, y)| temporal_manhattan(&x, &y))
        .ok_or(Error::MissingChannel("temporal"))
}

pub fn contextual_delta(a: &ImageServiceRecord, b: &ImageServiceRecord) -> Result<f64> {
    let (ta, tb) = (contextual_tokens(a), contextual_tokens(b));
    if ta.is_empty() && tb.is_empty() {
        return Err(Error::MissingChannel("contextual"));
    }
    Ok(contextual_distance(&ta, &tb))
}

/// All three channels measured quantitatively; missing channels become zero
/// with `Provenance::Missing`.
pub fn quantitative_deltas(a: &ImageServiceRecord, b: &ImageServiceRecord) -> DeltaVector {
    let wrap = |r: Result<f64>| r.map(ChannelDelta::quantitative).unwrap_or_else(|_| ChannelDelta::missing());
    DeltaVector {
        spatial: wrap(spatial_delta(a, b)),
        temporal: wrap(temporal_delta(a, b)),
        contextual: wrap(contextual_delta(a, b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tp(y: i32, mo: u32, d: u32, h: u32, mi: u32, s: u32) -> TimePoint {
        TimePoint::new(y, mo, d, h, mi, s).unwrap()
    }

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn manhattan_examples() {
        let a = tp(2015, 4, 25, 11, 56, 0);
        assert_eq!(temporal_manhattan(&a, &a), 0.0);
        // 8 + 2 + 23 + 2 + 26 + 0
        assert_eq!(temporal_manhattan(&a, &tp(2007, 10, 2, 9, 30, 0)), 8.0 + 6.0 + 23.0 + 2.0 + 26.0);
        assert_eq!(temporal_manhattan(&tp(2020, 1, 1, 0, 0, 0), &tp(2020, 1, 1, 0, 0, 30)), 30.0);
    }

    #[test]
    fn haversine_examples() {
        let sydney = (-33.8688, 151.2093);
        assert_eq!(haversine_km(sydney, sydney), 0.0);
        let antipodal = haversine_km((0.0, 0.0), (0.0, 180.0));
        assert!((antipodal - std::f64::consts::PI * EARTH_RADIUS_KM).abs() < 1e-9);
        let melbourne = (-37.8136, 144.9631);
        assert!((haversine_km(sydney, melbourne) - 713.4).abs() < 1.0);
    }

    #[test]
    fn jaccard_examples() {
        assert_eq!(contextual_jaccard(&set(&["a", "b", "c"]), &set(&["a", "b", "c"])), 1.0);
        assert_eq!(contextual_jaccard(&set(&["a", "b", "c"]), &set(&["b", "c", "d"])), 0.5);
        assert_eq!(contextual_jaccard(&set(&["a"]), &set(&["b"])), 0.0);
        assert_eq!(contextual_jaccard(&set(&[]), &set(&[])), 1.0);
    }

    #[test]
    fn distance_examples() {
        assert_eq!(contextual_distance(&set(&["a", "b"]), &set(&["a", "b"])), 0.0);
        assert_eq!(contextual_distance(&set(&["a", "b", "c"]), &set(&["b", "c", "d"])), 0.5);
        assert_eq!(contextual_distance(&set(&["a"]), &set(&["b"])), 1.0);
    }

    #[test]
    fn missing_channels() {
        use crate::attribute::ImageServiceRecord;
        let a = ImageServiceRecord::from_tags("a", Default::default()).unwrap();
        let b = ImageServiceRecord::from_tags("b", Default::default()).unwrap();
        assert_eq!(spatial_delta(&a, &b), Err(Error::MissingChannel("spatial")));
        assert_eq!(temporal_delta(&a, &b), Err(Error::MissingChannel("temporal")));
        let d = quantitative_deltas(&a, &b);
        assert_eq!(d.provenance(), [Provenance::Missing; 3]);
        assert_eq!(d.values(), [0.0; 3]);
    }
}
