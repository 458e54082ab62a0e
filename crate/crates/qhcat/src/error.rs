use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("not functorial: {0}")]
    NotFunctorial(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
}

pub type Result<T> = std::result::Result<T, Error>;
