use thiserror::Error;

/// Errors raised by group construction, lattice building and the
/// transfer-system machinery.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A parameter lies outside the domain of the requested construction.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured size limit was exceeded.
    #[error("capacity error: {what} would be {requested}, limit is {limit}")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    /// A group spec or label failed to parse.
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    /// An enumeration stopped before visiting every closed set.
    #[error("enumeration budget of {budget} closed sets exhausted")]
    BudgetExhausted { budget: u64 },

    /// An arrow between incomparable subgroups, or out of range indices.
    #[error("invalid arrow {src} -> {tgt}: {reason}")]
    InvalidArrow {
        src: usize,
        tgt: usize,
        reason: &'static str,
    },

    /// Reading or writing a file failed.
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
