//! Canonical sidecar tag names.
//!
//! Spellings follow EXIF/IPTC conventions. The table is versioned: any
//! rename is a breaking change for stored corpora and goldens.

pub const TAG_TABLE_VERSION: u32 = 1;

pub const ID: &str = "id";

pub const GPS_LATITUDE: &str = "GPSLatitude";
pub const GPS_LONGITUDE: &str = "GPSLongitude";
pub const GPS_SATELLITES: &str = "GPSSatellites";
pub const CITY: &str = "City";
pub const COUNTRY: &str = "Country";
pub const STATE: &str = "State";
pub const LOCATION: &str = "Location";

pub const DATE_TIME_ORIGINAL: &str = "DateTimeOriginal";
pub const DATE_TIME_DIGITIZED: &str = "DateTimeDigitized";
pub const GPS_TIME_STAMP: &str = "GPSTimeStamp";
pub const GPS_DATE_STAMP: &str = "GPSDateStamp";
pub const OFFSET_TIME: &str = "OffsetTime";
pub const OFFSET_TIME_ORIGINAL: &str = "OffsetTimeOriginal";
pub const OFFSET_TIME_DIGITIZED: &str = "OffsetTimeDigitized";

pub const TITLE: &str = "Title";
pub const CAPTION: &str = "Caption";
pub const CONTENT_DESCRIPTION: &str = "ContentDescription";
pub const HEADLINE: &str = "Headline";
pub const IMAGE_DESCRIPTION: &str = "ImageDescription";
pub const INSTRUCTIONS: &str = "Instructions";
pub const WEATHER_PROFILE: &str = "WeatherProfile";
pub const KEYWORDS: &str = "Keywords";
pub const SEMANTIC_NAMES: &str = "SemanticNames";

pub const IMAGE_WIDTH: &str = "ImageWidth";
pub const IMAGE_HEIGHT: &str = "ImageHeight";
pub const WHITE_BALANCE: &str = "WhiteBalance";
pub const SUBJECT_DISTANCE: &str = "SubjectDistance";
pub const CAMERA_ELEVATION_ANGLE: &str = "CameraElevationAngle";
pub const SHUTTER_SPEED: &str = "ShutterSpeed";
pub const EXPOSURE_TIME: &str = "ExposureTime";
pub const COVERAGE: &str = "Coverage";

/// Free-text tags that make up the contextual channel, in token order.
pub const CONTEXT_TEXT_TAGS: [&str; 7] = [
    TITLE,
    CAPTION,
    CONTENT_DESCRIPTION,
    HEADLINE,
    IMAGE_DESCRIPTION,
    INSTRUCTIONS,
    WEATHER_PROFILE,
];

/// List-valued contextual tags (items separated by `;` or `,`).
pub const CONTEXT_LIST_TAGS: [&str; 2] = [KEYWORDS, SEMANTIC_NAMES];

pub const SPATIAL_TEXT_TAGS: [&str; 4] = [CITY, COUNTRY, STATE, LOCATION];

pub const KNOWN_TAGS: [&str; 32] = [
    GPS_LATITUDE,
    GPS_LONGITUDE,
    GPS_SATELLITES,
    CITY,
    COUNTRY,
    STATE,
    LOCATION,
    DATE_TIME_ORIGINAL,
    DATE_TIME_DIGITIZED,
    GPS_TIME_STAMP,
    GPS_DATE_STAMP,
    OFFSET_TIME,
    OFFSET_TIME_ORIGINAL,
    OFFSET_TIME_DIGITIZED,
    TITLE,
    CAPTION,
    CONTENT_DESCRIPTION,
    HEADLINE,
    IMAGE_DESCRIPTION,
    INSTRUCTIONS,
    WEATHER_PROFILE,
    KEYWORDS,
    SEMANTIC_NAMES,
    IMAGE_WIDTH,
    IMAGE_HEIGHT,
    WHITE_BALANCE,
    SUBJECT_DISTANCE,
    CAMERA_ELEVATION_ANGLE,
    SHUTTER_SPEED,
    EXPOSURE_TIME,
    COVERAGE,
    ID,
];

pub fn is_known(tag: &str) -> bool {
    KNOWN_TAGS.contains(&tag)
}
