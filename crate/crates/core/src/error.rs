use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller passed arguments outside the operation's contract.
    #[error("usage error: {0}")]
    Usage(String),

    /// Mathematical domain violation (pole, zero constant term, non-positive argument).
    #[error("domain error: {0}")]
    Domain(String),

    /// Input object does not satisfy its structural invariants.
    #[error("validation error: {0}")]
    Validation(String),

    /// An identity that must hold exactly did not.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
