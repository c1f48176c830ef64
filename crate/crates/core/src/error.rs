use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("functions live on different domains")]
    DomainMismatch,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("resource budget exceeded: {0}")]
    Resource(String),

    #[error("divergent integral: {0}")]
    Divergent(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("ill-conditioned system: {0}")]
    IllConditioned(String),

    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
