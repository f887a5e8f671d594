use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("only p = 2 is supported, got p = {0}")]
    UnsupportedPrime(u32),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("degree {requested} out of range (computed through degree {available})")]
    DegreeOutOfRange { requested: usize, available: usize },

    #[error("engine integrity failure: {0}")]
    Integrity(String),

    #[error("unknown catalog group {0:?}")]
    UnknownGroup(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
