use std::fmt;

use serde::{Deserialize, Serialize};

use super::tags;
use super::ImageServiceRecord;

/// A broken type invariant. Violations are data: `validate` never fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule")]
pub enum Violation {
    EmptyId,
    LatitudeOutOfRange { value: f64 },
    LongitudeOutOfRange { value: f64 },
    PairedGpsMissing { present: String },
    InvalidTimePoint { field: String },
    DigitizedBeforeOriginal,
    EmptyKeyword { field: String },
    NegativeSubjectDistance { value: f64 },
    NonPositiveShutterSpeed { value: f64 },
    NonPositiveExposureTime { value: f64 },
}

impl Violation {
    /// Canonical tag the violation is about.
    pub fn tag(&self) -> &str {
        match self {
            Violation::EmptyId => tags::ID,
            Violation::LatitudeOutOfRange { .. } => tags::GPS_LATITUDE,
            Violation::LongitudeOutOfRange { .. } => tags::GPS_LONGITUDE,
            Violation::PairedGpsMissing { present } => {
                if present == tags::GPS_LATITUDE {
                    tags::GPS_LONGITUDE
                } else {
                    tags::GPS_LATITUDE
                }
            }
            Violation::InvalidTimePoint { field } | Violation::EmptyKeyword { field } => field,
            Violation::DigitizedBeforeOriginal => tags::DATE_TIME_DIGITIZED,
            Violation::NegativeSubjectDistance { .. } => tags::SUBJECT_DISTANCE,
            Violation::NonPositiveShutterSpeed { .. } => tags::SHUTTER_SPEED,
            Violation::NonPositiveExposureTime { .. } => tags::EXPOSURE_TIME,
        }
    }

    /// Single-field domain errors; these make a sidecar unparseable. Cross-field
    /// rules are reported by `validate` only.
    pub fn is_schema_error(&self) -> bool {
        !matches!(
            self,
            Violation::PairedGpsMissing { .. }
                | Violation::DigitizedBeforeOriginal
                | Violation::EmptyKeyword { .. }
        )
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyId => write!(f, "id is empty"),
            Violation::LatitudeOutOfRange { value } => write!(f, "latitude {value} outside [-90, 90]"),
            Violation::LongitudeOutOfRange { value } => {
                write!(f, "longitude {value} outside [-180, 180]")
            }
            Violation::PairedGpsMissing { present } => {
                write!(f, "{present} present without its paired coordinate")
            }
            Violation::InvalidTimePoint { field } => write!(f, "{field} is not a valid calendar time"),
            Violation::DigitizedBeforeOriginal => write!(f, "date digitized precedes original capture"),
            Violation::EmptyKeyword { field } => write!(f, "{field} contains an empty item"),
            Violation::NegativeSubjectDistance { value } => write!(f, "subject distance {value} < 0"),
            Violation::NonPositiveShutterSpeed { value } => write!(f, "shutter speed {value} <= 0"),
            Violation::NonPositiveExposureTime { value } => write!(f, "exposure time {value} <= 0"),
        }
    }
}

/// Checks every record invariant; an empty list means the record is valid.
pub fn validate(record: &ImageServiceRecord) -> Vec<Violation> {
    let mut out = Vec::new();
    if record.id.trim().is_empty() {
        out.push(Violation::EmptyId);
    }

    let s = &record.spatial;
    if let Some(lat) = s.gps_latitude {
        if !(-90.0..=90.0).contains(&lat) {
            out.push(Violation::LatitudeOutOfRange { value: lat });
        }
    }
    if let Some(lon) = s.gps_longitude {
        if !(-180.0..=180.0).contains(&lon) {
            out.push(Violation::LongitudeOutOfRange { value: lon });
        }
    }
    match (s.gps_latitude, s.gps_longitude) {
        (Some(_), None) => out.push(Violation::PairedGpsMissing {
            present: tags::GPS_LATITUDE.into(),
        }),
        (None, Some(_)) => out.push(Violation::PairedGpsMissing {
            present: tags::GPS_LONGITUDE.into(),
        }),
        _ => {}
    }

    let t = &record.temporal;
    for (field, tp) in [
        (tags::DATE_TIME_ORIGINAL, &t.datetime_original),
        (tags::DATE_TIME_DIGITIZED, &t.date_digitized),
        (tags::GPS_TIME_STAMP, &t.gps_timestamp),
        (tags::GPS_DATE_STAMP, &t.gps_datestamp),
    ] {
        if let Some(tp) = tp {
            if !tp.is_valid() {
                out.push(Violation::InvalidTimePoint { field: field.into() });
            }
        }
    }
    if let (Some(orig), Some(dig)) = (&t.datetime_original, &t.date_digitized) {
        if let (Some(o), Some(d)) = (orig.to_naive(), dig.to_naive()) {
            if d < o {
                out.push(Violation::DigitizedBeforeOriginal);
            }
        }
    }

    let c = &record.contextual;
    for (field, items) in [(tags::KEYWORDS, &c.keywords), (tags::SEMANTIC_NAMES, &c.semantic_names)] {
        if items.iter().any(|k| k.trim().is_empty()) {
            out.push(Violation::EmptyKeyword { field: field.into() });
        }
    }

    let i = &record.intrinsic;
    if let Some(d) = i.subject_distance.filter(|d| *d < 0.0) {
        out.push(Violation::NegativeSubjectDistance { value: d });
    }
    if let Some(v) = i.shutter_speed.filter(|v| *v <= 0.0) {
        out.push(Violation::NonPositiveShutterSpeed { value: v });
    }
    if let Some(v) = i.exposure_time.filter(|v| *v <= 0.0) {
        out.push(Violation::NonPositiveExposureTime { value: v });
    }
    out
}

/// A qualitative intrinsic-consistency observation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Finding {
    ShutterExposureMismatch {
        shutter_speed: f64,
        exposure_time: f64,
        deviation: f64,
    },
}

pub const DEFAULT_LINT_TOLERANCE: f64 = 0.10;

/// Flags an exposure time that disagrees with the shutter rate: a rate of
/// 200 implies an exposure of 1/200 s.
pub fn intrinsic_consistency_lint(record: &ImageServiceRecord, tolerance: f64) -> Vec<Finding> {
    let i = &record.intrinsic;
    let (Some(rate), Some(exposure)) = (i.shutter_speed, i.exposure_time) else {
        return Vec::new();
    };
    if rate <= 0.0 {
        return Vec::new();
    }
    let expected = 1.0 / rate;
    let deviation = (exposure - expected).abs() / expected;
    if deviation > tolerance {
        vec![Finding::ShutterExposureMismatch {
            shutter_speed: rate,
            exposure_time: exposure,
            deviation,
        }]
    } else {
        Vec::new()
    }
}
