use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected n = {expected}, got n = {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("form is not pointwise in E0^{degree}")]
    NotRuminForm { degree: usize },

    #[error("point lies outside the integration domain")]
    PointOutsideDomain,

    #[error("operator entries are not constant-coefficient")]
    NonConstantEntries,

    #[error("exponent p = {0} is not one of Q, Q/2, infinity")]
    BadLebesgueExponent(f64),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
