use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    /// A numeric precondition was violated (zero denominators, empty samples, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Input data failed validation.
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("training error: {0}")]
    Training(String),

    #[error("missing feature `{0}`")]
    MissingFeature(String),

    #[error("checksum mismatch for {what}: expected {expected}, found {found}")]
    ChecksumMismatch {
        what: String,
        expected: String,
        found: String,
    },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// True when the failure came from the filesystem rather than the data.
    pub fn is_io(&self) -> bool {
        match self {
            Error::Io(_) => true,
            Error::Csv(e) => matches!(e.kind(), csv::ErrorKind::Io(_)),
            Error::Json(e) => e.is_io(),
            _ => false,
        }
    }
}
