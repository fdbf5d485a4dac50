use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("advice tape truncated while reading {field}")]
    Truncated { field: &'static str },

    #[error("malformed advice: {0}")]
    MalformedAdvice(String),

    #[error("certificate rejected at bin {bin}: {reason}")]
    Certificate { bin: usize, reason: String },

    #[error("instance has {n} items, above the exact-solver limit of {limit}")]
    LimitExceeded { n: usize, limit: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
