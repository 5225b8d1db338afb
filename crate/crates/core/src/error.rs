use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The caller supplied data that violates an operation's precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The requested mode is not available for the given field.
    #[error("unsupported mode: {0}")]
    Unsupported(String),
    /// A configured computation budget would be exceeded.
    #[error("resource budget exceeded: {0}")]
    Budget(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
