use alloc::string::String;

/// Failures shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// The input lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The request exceeds a configured or validated capacity.
    #[error("capacity exceeded: {what}")]
    Capacity {
        what: String,
        /// Precision or exponent bits the request would have needed, if known.
        required_bits: Option<u64>,
    },
    /// A query went past the limit of a precomputed table.
    #[error("{value} is outside the table range 1..={limit}")]
    Range { value: u64, limit: u64 },
    /// Malformed text input (dyadic strings, polynomial s-expressions).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn capacity(what: impl Into<String>, required_bits: Option<u64>) -> Self {
        Error::Capacity {
            what: what.into(),
            required_bits,
        }
    }
}
