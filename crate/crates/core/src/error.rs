use std::fmt;

/// Error type shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A precondition on the caller's input was violated.
    Validation(String),
    /// The input is structurally impossible as an output of the matching
    /// encoder (wrong marker placement, spans running past the end, ...).
    MalformedInput(String),
    /// An internal invariant failed at runtime. Seeing this means either a
    /// bug or a parameter outside the certified range slipped through.
    InvariantViolation(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        Error::MalformedInput(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::InvariantViolation(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Validation(msg) => write!(f, "validation error: {msg}"),
            Error::MalformedInput(msg) => write!(f, "malformed input: {msg}"),
            Error::InvariantViolation(msg) => write!(f, "invariant violation: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
