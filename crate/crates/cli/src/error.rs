use std::fmt;

use metatrust_core::Error;
use serde::Serialize;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExitKind {
    Input,
    Model,
    Internal,
}

impl ExitKind {
    pub fn code(self) -> i32 {
        match self {
            ExitKind::Input => 2,
            ExitKind::Model => 3,
            ExitKind::Internal => 4,
        }
    }
}

/// A failed command, printed to stderr as one JSON object.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliError {
    pub kind: ExitKind,
    pub error: String,
    pub message: String,
}

impl CliError {
    pub fn new(kind: ExitKind, error: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            kind,
            error: error.into(),
            message: message.into(),
        }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self::new(ExitKind::Input, "input", message)
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(ExitKind::Internal, "internal", message)
    }

    pub fn exit_code(&self) -> i32 {
        self.kind.code()
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({
            "error": self.error,
            "message": self.message,
            "exit_code": self.exit_code(),
        })
        .to_string()
    }

    /// Prefixes the message, e.g. with the offending path.
    pub fn context(mut self, what: impl fmt::Display) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.error, self.message)
    }
}

impl std::error::Error for CliError {}

fn error_name(err: &Error) -> &'static str {
    match err {
        Error::MalformedInput(_) => "malformed_input",
        Error::SchemaViolation { .. } => "schema_violation",
        Error::DuplicateId(_) => "duplicate_id",
        Error::MissingChannel(_) => "missing_channel",
        Error::EmptyCorpus => "empty_corpus",
        Error::EmptyVocabulary => "empty_vocabulary",
        Error::ZeroMatrix => "zero_matrix",
        Error::RankDeficient { .. } => "rank_deficient",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::DegenerateLabels(_) => "degenerate_labels",
        Error::InsufficientSamples { .. } => "insufficient_samples",
        Error::CollinearClass(_) => "collinear_class",
        Error::VerticalPlane => "vertical_plane",
        Error::KTooLarge { .. } => "k_too_large",
        Error::NoPlanes => "no_planes",
        Error::EmptyKeywordSet => "empty_keyword_set",
        Error::NoPredictedIll => "no_predicted_ill",
        Error::ChannelMissing { .. } => "channel_missing",
        Error::InvalidConfig(_) => "invalid_config",
        Error::VersionMismatch { .. } => "version_mismatch",
        Error::Io(_) => "io",
    }
}

impl From<Error> for CliError {
    /// Everything derived from user data is an input error, except version
    /// mismatches, which are model errors.
    fn from(err: Error) -> Self {
        let kind = match err {
            Error::VersionMismatch { .. } => ExitKind::Model,
            _ => ExitKind::Input,
        };
        Self::new(kind, error_name(&err), err.to_string())
    }
}

/// Loading a model or profile: any failure is a model error.
pub fn model_error(err: Error) -> CliError {
    let mut e = CliError::from(err);
    e.kind = ExitKind::Model;
    e
}

pub type CliResult<T> = std::result::Result<T, CliError>;
