//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by grid, operator, and model constructions.
#[derive(Debug, Error)]
pub enum OperError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operator norm {norm} exceeds the contraction bound 1")]
    NotAContraction { norm: f64 },

    #[error("1 lies in the spectrum (eigenvalue obstruction): {detail}")]
    SpectrumObstruction { detail: String },

    #[error("linear system is numerically singular: {detail}")]
    Singular { detail: String },

    #[error("coefficient window margin exhausted: {detail}")]
    MarginExhausted { detail: String },

    #[error("probe violates the boundary margin: {detail}")]
    MarginViolated { detail: String },

    #[error("domain condition violated: {detail}")]
    DomainViolation { detail: String },

    #[error("C-class verdict inconclusive: {detail}")]
    Inconclusive { detail: String },

    #[error("projection family is not monotone decreasing: {detail}")]
    NotMonotone { detail: String },

    #[error("projection family is not a decomposition of the identity: {detail}")]
    NotADecomposition { detail: String },

    #[error("grids are inconsistent: {detail}")]
    GridMismatch { detail: String },

    #[error("eigenvalue iteration failed to converge after {iterations} sweeps")]
    EigenNoConvergence { iterations: usize },

    #[error("invalid input: {detail}")]
    InvalidInput { detail: String },

    #[error("precondition failed: {detail}")]
    Precondition { detail: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, OperError>;
