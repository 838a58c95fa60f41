use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("index {index:?} out of range for orders {orders:?}")]
    IndexOutOfRange { index: Vec<usize>, orders: Vec<usize> },

    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("mismatched torsion orders: {left:?} vs {right:?}")]
    OrdersMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("invalid annihilation set: {0}")]
    InvalidSpec(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("problem not certified: {0}")]
    Uncertified(String),

    #[error("no partition claim derivable from this annihilation set; select one explicitly")]
    NoClaim,

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
