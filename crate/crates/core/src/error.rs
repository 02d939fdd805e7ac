use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point outside the admissible ball: |z| = {norm} (limit {limit})")]
    OutOfDomain { norm: f64, limit: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("quadrature tolerance {tolerance:e} not met (best estimate {best}, error estimate {error:e})")]
    ToleranceNotMet {
        best: f64,
        error: f64,
        tolerance: f64,
    },

    /// The Jacobian determinant vanishes where a nonzero value is required.
    #[error("degenerate: {0}")]
    Degenerate(String),

    /// A map supposed to send the ball into itself left it at the witness point.
    #[error("range violation in {child}: image of witness has norm {image_norm}")]
    RangeViolation {
        child: String,
        witness: Vec<num_complex::Complex64>,
        image_norm: f64,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A battery map whose prenorm estimate is not one.
    #[error("map {index} is not normalized: prenorm estimate {estimate}")]
    NotNormalized { index: usize, estimate: f64 },

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
