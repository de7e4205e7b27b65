use thiserror::Error;

/// Errors raised by the geometry, algebra and solver layers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("metric is singular at the requested point (|det g| = {det:e}, scale {scale:e})")]
    SingularMetric { det: f64, scale: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("numerical differentiation did not reach tolerance (estimated error {estimate:e})")]
    DifferentiationFailure { estimate: f64 },

    #[error("operation requires dimension >= {min}, got {found}")]
    DimensionTooSmall { min: usize, found: usize },

    #[error("tetrad normalization defect {defect:e} exceeds tolerance")]
    BadTetrad { defect: f64 },

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("Jacobian is numerically singular at the start point")]
    SingularJacobian,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("wrong metric signature: {0}")]
    WrongSignature(String),

    #[error("point is outside the admissible domain: {0}")]
    OutOfDomain(String),

    #[error("closed form does not apply: {0}")]
    BadCase(String),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
