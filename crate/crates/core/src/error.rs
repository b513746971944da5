use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("duplicate account identifiers: {}", .0.join(", "))]
    DuplicateIds(Vec<String>),
    #[error("unknown account id: {0}")]
    UnknownAccount(String),
    #[error("registration date {registered} is after reference date {reference}")]
    RegisteredAfterReference { registered: String, reference: String },
    #[error("degenerate labels: both classes must be present")]
    DegenerateLabels,
    #[error("not enough samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("non-finite feature value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("gram matrix of view {view} is singular; use a positive ridge")]
    SingularGram { view: usize },
    #[error("eigensolver failed to converge")]
    NoConvergence,
    #[error("invalid date: {0}")]
    InvalidDate(String),
}
