use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::tags;
use super::time::{parse_offset, TimePoint};
use super::{
    ContextualAttributes, ImageServiceRecord, IntrinsicAttributes, SpatialAttributes,
    TemporalAttributes, WhiteBalance,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SidecarFormat {
    /// One flat JSON object, tag -> string, plus `id`.
    JsonSidecar,
    /// A header row of canonical tag names and one value row.
    CsvRow,
}

/// Parses one sidecar file into a record. Unknown tags are kept verbatim in
/// `raw_tags`.
pub fn parse_sidecar(bytes: &[u8], format: SidecarFormat) -> Result<ImageServiceRecord> {
    let tags = match format {
        SidecarFormat::JsonSidecar => json_tags(bytes)?,
        SidecarFormat::CsvRow => csv_tags(bytes)?,
    };
    let id = tags
        .get(tags::ID)
        .cloned()
        .ok_or_else(|| Error::MalformedInput("sidecar has no `id`".into()))?;
    from_tag_map(id, tags)
}

fn json_tags(bytes: &[u8]) -> Result<BTreeMap<String, String>> {
    let value: serde_json::Value = serde_json::from_slice(bytes)?;
    let object = value
        .as_object()
        .ok_or_else(|| Error::MalformedInput("sidecar is not a JSON object".into()))?;
    let mut tags = BTreeMap::new();
    for (key, value) in object {
        let text = match value {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::Bool(b) => b.to_string(),
            serde_json::Value::Null => continue,
            other => {
                return Err(Error::MalformedInput(format!(
                    "tag `{key}` is not a scalar: {other}"
                )))
            }
        };
        tags.insert(key.clone(), text);
    }
    Ok(tags)
}

fn csv_tags(bytes: &[u8]) -> Result<BTreeMap<String, String>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(bytes);
    let headers = reader.headers()?.clone();
    let mut rows = reader.records();
    let row = rows
        .next()
        .ok_or_else(|| Error::MalformedInput("csv sidecar has no value row".into()))??;
    if rows.next().is_some() {
        return Err(Error::MalformedInput("csv sidecar has more than one row".into()));
    }
    Ok(headers
        .iter()
        .zip(row.iter())
        .filter(|(_, v)| !v.is_empty())
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect())
}

pub(super) fn from_tag_map(id: String, mut raw: BTreeMap<String, String>) -> Result<ImageServiceRecord> {
    if id.trim().is_empty() {
        return Err(Error::SchemaViolation {
            tag: tags::ID.into(),
            reason: "id is empty".into(),
        });
    }
    raw.remove(tags::ID);
    let get = |tag: &str| raw.get(tag).map(|v| v.trim()).filter(|v| !v.is_empty());
    let text = |tag: &str| get(tag).map(str::to_string);

    let spatial = SpatialAttributes {
        gps_latitude: get(tags::GPS_LATITUDE)
            .map(|v| parse_coord(tags::GPS_LATITUDE, v, 90.0))
            .transpose()?,
        gps_longitude: get(tags::GPS_LONGITUDE)
            .map(|v| parse_coord(tags::GPS_LONGITUDE, v, 180.0))
            .transpose()?,
        gps_satellite: text(tags::GPS_SATELLITES),
        city: text(tags::CITY),
        country: text(tags::COUNTRY),
        state: text(tags::STATE),
        location: text(tags::LOCATION),
    };

    let offset = |tag: &str| -> Result<Option<i32>> {
        get(tag)
            .map(|v| parse_offset(v).map_err(|reason| violation(tag, reason)))
            .transpose()
    };
    let timezone_offset = offset(tags::OFFSET_TIME)?;
    let original_offset = offset(tags::OFFSET_TIME_ORIGINAL)?.or(timezone_offset);
    let digitized_offset = offset(tags::OFFSET_TIME_DIGITIZED)?.or(timezone_offset);
    let time = |tag: &str, fallback: Option<i32>| -> Result<Option<TimePoint>> {
        get(tag)
            .map(|v| TimePoint::parse(v, fallback).map_err(|reason| violation(tag, reason)))
            .transpose()
    };
    let gps_datestamp = time(tags::GPS_DATE_STAMP, Some(0))?;
    let gps_timestamp = match get(tags::GPS_TIME_STAMP) {
        None => None,
        Some(v) if v.contains([' ', 'T']) => Some(
            TimePoint::parse(v, Some(0)).map_err(|r| violation(tags::GPS_TIME_STAMP, r))?,
        ),
        Some(v) => {
            let date = gps_datestamp.as_ref().ok_or_else(|| {
                violation(tags::GPS_TIME_STAMP, "time-only value without GPSDateStamp".into())
            })?;
            Some(TimePoint::parse_time_on(date, v).map_err(|r| violation(tags::GPS_TIME_STAMP, r))?)
        }
    };
    let temporal = TemporalAttributes {
        datetime_original: time(tags::DATE_TIME_ORIGINAL, original_offset)?,
        date_digitized: time(tags::DATE_TIME_DIGITIZED, digitized_offset)?,
        gps_timestamp,
        gps_datestamp,
        timezone_offset,
    };

    let contextual = ContextualAttributes {
        title: text(tags::TITLE),
        caption: text(tags::CAPTION),
        content_description: text(tags::CONTENT_DESCRIPTION),
        headline: text(tags::HEADLINE),
        image_description: text(tags::IMAGE_DESCRIPTION),
        instructions: text(tags::INSTRUCTIONS),
        weather_profile: text(tags::WEATHER_PROFILE),
        keywords: get(tags::KEYWORDS).map(split_list).unwrap_or_default(),
        semantic_names: get(tags::SEMANTIC_NAMES).map(split_list).unwrap_or_default(),
    };

    let number = |tag: &str| -> Result<Option<f64>> {
        get(tag).map(|v| parse_number(tag, v)).transpose()
    };
    let resolution = match (get(tags::IMAGE_WIDTH), get(tags::IMAGE_HEIGHT)) {
        (Some(w), Some(h)) => Some((parse_pixels(tags::IMAGE_WIDTH, w)?, parse_pixels(tags::IMAGE_HEIGHT, h)?)),
        (None, None) => None,
        (Some(_), None) => return Err(violation(tags::IMAGE_HEIGHT, "width without height".into())),
        (None, Some(_)) => return Err(violation(tags::IMAGE_WIDTH, "height without width".into())),
    };
    let shutter_speed = get(tags::SHUTTER_SPEED)
        .map(|v| parse_shutter_rate(v).ok_or_else(|| violation(tags::SHUTTER_SPEED, format!("bad value `{v}`"))))
        .transpose()?;
    let intrinsic = IntrinsicAttributes {
        resolution,
        white_balance: match get(tags::WHITE_BALANCE).map(str::to_ascii_lowercase).as_deref() {
            Some("auto") | Some("0") => WhiteBalance::Auto,
            Some("manual") | Some("1") => WhiteBalance::Manual,
            _ => WhiteBalance::Unknown,
        },
        subject_distance: number(tags::SUBJECT_DISTANCE)?,
        camera_elevation_angle: number(tags::CAMERA_ELEVATION_ANGLE)?,
        shutter_speed,
        exposure_time: number(tags::EXPOSURE_TIME)?,
        coverage: text(tags::COVERAGE),
    };

    let record = ImageServiceRecord {
        id,
        spatial,
        temporal,
        contextual,
        intrinsic,
        raw_tags: raw,
    };
    if let Some(v) = super::validate(&record).into_iter().find(|v| v.is_schema_error()) {
        return Err(violation(v.tag(), v.to_string()));
    }
    Ok(record)
}

fn violation(tag: &str, reason: String) -> Error {
    Error::SchemaViolation {
        tag: tag.to_string(),
        reason,
    }
}

fn parse_coord(tag: &str, value: &str, limit: f64) -> Result<f64> {
    let x = parse_number(tag, value)?;
    if !(-limit..=limit).contains(&x) {
        return Err(violation(tag, format!("{x} outside [-{limit}, {limit}]")));
    }
    Ok(x)
}

/// Plain decimal or a rational `a/b`.
fn parse_number(tag: &str, value: &str) -> Result<f64> {
    let x = match value.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| violation(tag, format!("bad number `{value}`")))?;
            let d: f64 = d.trim().parse().map_err(|_| violation(tag, format!("bad number `{value}`")))?;
            n / d
        }
        None => value.parse().map_err(|_| violation(tag, format!("bad number `{value}`")))?,
    };
    if !x.is_finite() {
        return Err(violation(tag, format!("non-finite value `{value}`")));
    }
    Ok(x)
}

fn parse_pixels(tag: &str, value: &str) -> Result<u32> {
    value
        .parse()
        .map_err(|_| violation(tag, format!("bad pixel count `{value}`")))
}

/// "1/200" is a 1/200 s shutter, i.e. rate 200; a bare number is already a rate.
fn parse_shutter_rate(value: &str) -> Option<f64> {
    let rate = match value.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().ok()?;
            let d: f64 = d.trim().parse().ok()?;
            d / n
        }
        None => value.parse().ok()?,
    };
    rate.is_finite().then_some(rate)
}

fn split_list(value: &str) -> Vec<String> {
    value.split([';', ',']).map(|s| s.trim().to_string()).collect()
}

pub(super) fn to_json_value(record: &ImageServiceRecord) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    let mut all: BTreeMap<&str, &str> = record
        .raw_tags
        .iter()
        .map(|(k, v)| (k.as_str(), v.as_str()))
        .collect();
    all.insert(tags::ID, &record.id);
    for (k, v) in all {
        map.insert(k.to_string(), serde_json::Value::String(v.to_string()));
    }
    serde_json::Value::Object(map)
}

pub(super) fn to_json(record: &ImageServiceRecord) -> String {
    // serde_json's map is ordered (BTreeMap without preserve_order).
    serde_json::to_string_pretty(&to_json_value(record)).expect("string map serializes")
}

pub(super) fn to_csv(record: &ImageServiceRecord) -> (Vec<String>, Vec<String>) {
    let mut all: BTreeMap<String, String> = record.raw_tags.clone();
    all.insert(tags::ID.to_string(), record.id.clone());
    all.into_iter().unzip()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn json(text: &str) -> Result<ImageServiceRecord> {
        parse_sidecar(text.as_bytes(), SidecarFormat::JsonSidecar)
    }

    #[test]
    fn maps_gps_fields() {
        let r = json(r#"{"id":"a1","GPSLatitude":"-33.8688","GPSLongitude":"151.2093"}"#).unwrap();
        assert_eq!(r.spatial.gps(), Some((-33.8688, 151.2093)));
    }

    #[test]
    fn out_of_range_latitude_names_tag() {
        match json(r#"{"id":"a2","GPSLatitude":"91.0"}"#) {
            Err(Error::SchemaViolation { tag, .. }) => assert_eq!(tag, "GPSLatitude"),
            other => panic!("expected schema violation, got {other:?}"),
        }
        match json(r#"{"id":"a2","GPSLatitude":"200.0","GPSLongitude":"0"}"#) {
            Err(Error::SchemaViolation { tag, .. }) => assert_eq!(tag, "GPSLatitude"),
            other => panic!("expected schema violation, got {other:?}"),
        }
    }

    #[test]
    fn grouped_and_raw_agree() {
        let r = json(
            r#"{"id":"a3","Headline":"Storm hits coast","Keywords":"storm; coast ;flood","DateTimeOriginal":"2018:11:28 07:15:00","MakerNote":"xyz"}"#,
        )
        .unwrap();
        assert_eq!(r.contextual.headline.as_deref(), Some("Storm hits coast"));
        assert_eq!(r.contextual.keywords, vec!["storm", "coast", "flood"]);
        assert_eq!(r.temporal.datetime_original.unwrap().components(), [2018, 11, 28, 7, 15, 0]);
        for tag in ["Headline", "Keywords", "DateTimeOriginal", "MakerNote"] {
            assert!(r.raw_tags.contains_key(tag), "{tag} missing from raw_tags");
        }
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(json("{not json"), Err(Error::MalformedInput(_))));
        assert!(matches!(json("[1,2]"), Err(Error::MalformedInput(_))));
        assert!(matches!(json(r#"{"GPSLatitude":"1"}"#), Err(Error::MalformedInput(_))));
        assert!(matches!(
            json(r#"{"id":"x","DateTimeOriginal":"yesterday"}"#),
            Err(Error::SchemaViolation { .. })
        ));
    }

    #[test]
    fn csv_row_parses() {
        let text = "id,GPSLatitude,GPSLongitude,Caption\nc1,10.5,20.25,\"Crash, downtown\"\n";
        let r = parse_sidecar(text.as_bytes(), SidecarFormat::CsvRow).unwrap();
        assert_eq!(r.id, "c1");
        assert_eq!(r.spatial.gps(), Some((10.5, 20.25)));
        assert_eq!(r.contextual.caption.as_deref(), Some("Crash, downtown"));
    }

    #[test]
    fn shutter_rate_and_exposure() {
        let r = json(r#"{"id":"s","ShutterSpeed":"1/200","ExposureTime":"1/200"}"#).unwrap();
        assert_eq!(r.intrinsic.shutter_speed, Some(200.0));
        assert_eq!(r.intrinsic.exposure_time, Some(0.005));
    }

    #[test]
    fn serializer_sorts_keys() {
        let r = json(r#"{"id":"k","Title":"t","City":"Sydney","Caption":"c"}"#).unwrap();
        let out = r.to_sidecar_json();
        let keys: Vec<usize> = ["Caption", "City", "Title", "id"]
            .iter()
            .map(|k| out.find(&format!("\"{k}\"")).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }
}
