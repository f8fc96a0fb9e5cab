use thiserror::Error;

/// Failures raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature did not converge: estimate {estimate:e} with error {error:e} after {evaluations} evaluations")]
    Quadrature {
        estimate: f64,
        error: f64,
        evaluations: usize,
    },

    #[error("contour validation failed: {0}")]
    Contour(String),

    #[error("Mellin-Barnes evaluation failed: {0}")]
    MellinBarnes(String),

    #[error("fixture parse error on line {line}: {message}")]
    Fixture { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
