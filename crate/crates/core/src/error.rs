use thiserror::Error;

/// Errors produced by graph ingestion and the counting engines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The caller asked for something the operation does not support.
    #[error("usage: {0}")]
    Usage(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("input is not acyclic")]
    NotAcyclic,

    /// A configured size or attempt budget was exceeded.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// An exactness check failed; this indicates an engine bug or an
    /// inconsistent oracle, never a property of the input.
    #[error("inconsistent result: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
