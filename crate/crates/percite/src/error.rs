//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by ingestion, scoring and testing.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input that never became a corpus (bad CSV/JSONL, bad row).
    #[error("parse error: {0}")]
    Parse(String),

    /// A validated precondition was violated by the caller.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A paper references a reference set that does not exist.
    #[error("paper {paper_id}: unresolved reference-set key {refset_key:?}")]
    UnresolvedRefset { paper_id: String, refset_key: String },

    /// Fractional citation values were requested before being computed.
    #[error("missing fractional citation values: {0}")]
    MissingFractional(String),

    /// A statistic is undefined for the given inputs.
    #[error("undefined: {0}")]
    Undefined(String),

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn undefined(msg: impl Into<String>) -> Self {
        Error::Undefined(msg.into())
    }
}
