use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable code for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Argument(_) => "E_ARGUMENT",
            Error::Hypothesis(_) => "E_HYPOTHESIS",
            Error::Invariant(_) => "E_INVARIANT",
            Error::Unsupported(_) => "E_UNSUPPORTED",
            Error::Parse { .. } => "E_PARSE",
            Error::Io(_) => "E_IO",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
