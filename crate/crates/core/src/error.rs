use thiserror::Error;

/// Errors raised by the kernels, formula evaluators and pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A Cholesky pivot was not strictly positive.
    #[error("cholesky breakdown at pivot {index} (value {pivot:e})")]
    Breakdown { index: usize, pivot: f64 },

    #[error("triangular factor has a zero diagonal entry at {index}")]
    SingularTriangular { index: usize },

    #[error("jacobi iteration did not converge after {sweeps} sweeps")]
    Convergence { sweeps: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
