//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input syntax (JSON, CSV, ...), with position when known.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// Structurally valid input that violates a schema rule.
    #[error("schema error ({scope}): {message}")]
    Schema { scope: String, message: String },

    /// A span or interval points outside its text.
    #[error("offset error: {0}")]
    Offset(String),

    /// A question is not bound to any existing passage.
    #[error("binding error: {0}")]
    Binding(String),

    /// An operation was requested that the dataset cannot support
    /// (e.g. span ablations on a span-free corpus).
    #[error("capability error: {0}")]
    Capability(String),

    /// Invalid parameter value.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Response or judgment data violates its own contract.
    #[error("data error: {0}")]
    Data(String),

    /// Judgment data does not cover every question as required.
    #[error("completeness error: {0}")]
    Completeness(String),

    /// Could not reach an external answerer backend.
    #[error("backend transport error: {0}")]
    BackendTransport(String),

    /// External backend did not respond in time.
    #[error("backend timeout: {0}")]
    BackendTimeout(String),

    /// External backend replied with something that is not a valid response record.
    #[error("backend malformed response: {0}")]
    BackendMalformed(String),

    /// External backend returned the wrong number of scores.
    #[error("backend arity error: expected {expected} scores, got {got}")]
    BackendArity { expected: usize, got: usize },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn schema(scope: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            scope: scope.into(),
            message: message.into(),
        }
    }
}
