use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {n} outside supported range 1..={max}")]
    DimensionOutOfRange { n: usize, max: usize },

    #[error("bit pattern {bits:#x} has bits outside the first {n} coordinates")]
    BitsOutOfRange { bits: u64, n: usize },

    #[error("coordinate set {set:#x} overlaps fixed coordinates {fixed:#x}")]
    Overlap { set: u64, fixed: u64 },

    #[error("subcube carries zero mass; restriction is undefined")]
    ZeroMass,

    #[error("measure is not normalized: mean density {mean}")]
    NotNormalized { mean: f64 },

    #[error("negative density {value} at point {index:#x}")]
    NegativeDensity { index: u64, value: f64 },

    #[error("sample set is empty")]
    EmptySampleSet,

    #[error("need {need} samples but only {have} available")]
    InsufficientSamples { need: usize, have: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("query budget of {budget} exceeded after {used} queries")]
    BudgetExceeded { budget: u64, used: u64 },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
