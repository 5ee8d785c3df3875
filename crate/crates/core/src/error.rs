use thiserror::Error;

use crate::jacring::SliceKey;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("unknown field `{0}` (expected Q, Qi or Fp:<prime>)")]
    UnknownField(String),
    #[error("{0} is not an odd prime below 2^62")]
    BadModulus(u64),
    #[error("prime {prime} divides the denominator of {value}")]
    DenominatorDivisible { prime: u64, value: String },
    #[error("F_{0} has no square root of -1")]
    NoImaginaryUnit(u64),
    #[error("imaginary part {0} is not allowed over Q")]
    NotReal(String),
    #[error("malformed number `{0}`")]
    BadNumber(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degree {degree} exceeds the configured cap {cap}")]
    DegreeCap { degree: i64, cap: u32 },
    #[error("element has bigrade {found:?}, expected {expected:?}")]
    BigradeMismatch { expected: SliceKey, found: Option<SliceKey> },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("point is not on the base cubic: {0}")]
    NotOnCurve(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("calibration failed: {0}")]
    Calibration(String),
    #[error("cross-check could not find a usable prime after {0} attempts")]
    PrimeExhausted(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
