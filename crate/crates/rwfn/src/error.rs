//! Error type shared across the crate.
//!
//! Every fallible public operation returns [`Result`]. Variants map onto
//! failure categories rather than call sites, so callers (and the CLI exit
//! codes) can branch on the kind of failure without string matching.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated (bad dimension, empty
    /// input, out-of-range rate, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A computation produced or received a non-finite value.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A referenced entity (atom degree, constant, predicate) could not be
    /// resolved.
    #[error("lookup error: {0}")]
    Lookup(String),

    /// Data does not match the declared signature or feature schema.
    #[error("schema error: {0}")]
    Schema(String),

    /// A knowledge base invariant (no duplicate or contradictory example
    /// atoms) was violated.
    #[error("consistency error: {0}")]
    Consistency(String),

    /// A file could not be parsed; `record` is the offending record or line
    /// index when known.
    #[error("parse error{}: {msg}", match record { Some(r) => format!(" at record {r}"), None => String::new() })]
    Parse { record: Option<usize>, msg: String },

    /// The requested dataset split cannot be constructed.
    #[error("split error: {0}")]
    Split(String),

    /// An operation was called on an object in the wrong state (e.g. scoring
    /// with an untrained theory).
    #[error("state error: {0}")]
    State(String),

    /// An experiment configuration is invalid; `field` is the offending key
    /// path.
    #[error("config error at `{field}`: {msg}")]
    Config { field: String, msg: String },

    /// A checkpoint and a dataset (or two other artifacts) do not agree on
    /// signature or schema.
    #[error("compatibility error: {0}")]
    Compatibility(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn parse(record: Option<usize>, msg: impl Into<String>) -> Self {
        Error::Parse {
            record,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
