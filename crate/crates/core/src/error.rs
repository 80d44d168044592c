use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("construction failure: {0}")]
    ConstructionFailure(String),

    #[error("no Hamilton path in Q3 from {from:03b} to {to:03b} (even distance)")]
    NoPath { from: u8, to: u8 },

    #[error("duplicate blocks at positions {first} and {second}")]
    DuplicateBlocks { first: usize, second: usize },

    #[error("invalid endpoint: {0}")]
    InvalidEndpoint(String),

    #[error("search budget of {0} nodes exceeded")]
    Timeout(u64),
}

impl Error {
    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }

    pub(crate) fn construction(msg: impl Into<String>) -> Self {
        Error::ConstructionFailure(msg.into())
    }
}
