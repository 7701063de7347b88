use thiserror::Error;

use crate::intention::IntentionLevel;

/// Errors surfaced by the metatrust pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("schema violation in tag `{tag}`: {reason}")]
    SchemaViolation { tag: String, reason: String },

    #[error("duplicate record id `{0}`")]
    DuplicateId(String),

    #[error("channel `{0}` missing on at least one side")]
    MissingChannel(&'static str),

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("empty vocabulary")]
    EmptyVocabulary,

    #[error("matrix has no nonzero entry")]
    ZeroMatrix,

    #[error("retained singular value {index} is zero")]
    RankDeficient { index: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("labels are degenerate: {0}")]
    DegenerateLabels(String),

    #[error("level {level} has too few samples ({count}, need {needed})")]
    InsufficientSamples {
        level: IntentionLevel,
        count: usize,
        needed: usize,
    },

    #[error("points for level {0} are collinear; plane is underdetermined")]
    CollinearClass(IntentionLevel),

    #[error("plane is vertical (c = 0); area over the unit square is undefined")]
    VerticalPlane,

    #[error("k = {k} exceeds the number of distinct points ({distinct})")]
    KTooLarge { k: usize, distinct: usize },

    #[error("no intention planes")]
    NoPlanes,

    #[error("keyword set is empty")]
    EmptyKeywordSet,

    #[error("no predicted ill-intention samples; precision undefined")]
    NoPredictedIll,

    #[error("record `{id}` has no `{channel}` channel to mutate")]
    ChannelMissing { id: String, channel: &'static str },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("model version mismatch: expected `{expected}`, found `{found}`")]
    VersionMismatch { expected: String, found: String },

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::MalformedInput(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::MalformedInput(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
