use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("color out of range: {0}")]
    ColorOutOfRange(i64),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("commuting pair {0} and {1}: the word would be trivial")]
    CommutingPair(String, String),
    #[error("side swap requires square dimensions, got {m}x{n}")]
    NonSquare { m: usize, n: usize },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("unknown group: {0}")]
    UnknownGroup(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
