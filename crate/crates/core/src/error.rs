use thiserror::Error;

/// Errors raised by the exact and numeric QSP layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid order {0}: the order of a root of unity must be at least 1")]
    InvalidOrder(usize),
    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("order {0} is not supported here: {1}")]
    UnsupportedOrder(usize, &'static str),
    #[error("degree {0} is even; the closed-form schedule exists for odd degrees only")]
    EvenDegree(usize),
    #[error("invalid degree {0}: degree must be a positive integer")]
    InvalidDegree(usize),
    #[error("x = {0} lies outside [-1, 1]")]
    OutOfDomain(f64),
    #[error("sign function {0} is not in the even class (product of values is -1)")]
    NotEvenClass(String),
    #[error("index {index} out of range for degree {degree}")]
    IndexOutOfRange { index: usize, degree: usize },
    #[error("a residual sweep needs at least one sample")]
    EmptySweep,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
