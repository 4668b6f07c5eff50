use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("simplex not found: {0:?}")]
    NotFound(Vec<usize>),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid degree {degree} (allowed: {allowed})")]
    InvalidDegree { degree: usize, allowed: String },
    #[error("unsupported dimension {0}; at most 3 is supported")]
    UnsupportedDimension(usize),
    #[error("index {index} out of range (size {size})")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("family is not a Cech cocycle: overlap disagreement {0:e}")]
    NotACocycle(f64),
    #[error("component is not constant: spread {0:e}")]
    NotInKernel(f64),
    #[error("numerical breakdown at zig-zag step {step}: closedness residual {residual:e}")]
    NumericalBreakdown { step: usize, residual: f64 },
    #[error("cannot parse spec {spec:?}: {reason}")]
    Spec { spec: String, reason: String },
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn spec(spec: &str, reason: impl Into<String>) -> Self {
        Error::Spec { spec: spec.to_string(), reason: reason.into() }
    }
}
