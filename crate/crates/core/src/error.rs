use thiserror::Error;

/// Errors raised by the colimit library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("dimensions must be positive")]
    EmptyDimension,

    #[error("non-finite scalar in input")]
    NonFinite,

    #[error("operator is not a contraction (norm {norm})")]
    NotContraction { norm: f64 },

    #[error("norm gap {gap} is negative beyond roundoff")]
    NegativeGap { gap: f64 },

    #[error("map {index} violates the declared {declared} category (norm {norm})")]
    CategoryViolation {
        index: usize,
        declared: &'static str,
        norm: f64,
    },

    #[error("invalid tail rule: {0}")]
    InvalidTail(String),

    #[error("stage index {target} precedes class index {index}")]
    PushBackwards { index: usize, target: usize },

    #[error("limits are undefined on chains of bounded maps")]
    BoundedChain,

    #[error("norm increased from {before} to {after} at stage {stage}")]
    NotMonotone {
        stage: usize,
        before: f64,
        after: f64,
    },

    #[error("zero test is indeterminate: norm {value} with radius {error}")]
    Indeterminate { value: f64, error: f64 },

    #[error("unitary/decaying split of the repeated map is numerically ambiguous")]
    AmbiguousSplit,

    #[error("cocone condition fails at stage {index} (residual {residual})")]
    InvalidCocone { index: usize, residual: f64 },

    #[error("naturality square fails at stage {index} (residual {residual})")]
    InvalidMorphism { index: usize, residual: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
