use thiserror::Error;

/// Errors produced by the engine.
///
/// Variants are split into input validation problems and numerical failures
/// so front ends can map them onto distinct exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("quadrature not converged: relative change {relative_change:.3e} on doubling exceeds {tolerance:.1e} ({what})")]
    Convergence {
        what: &'static str,
        relative_change: f64,
        tolerance: f64,
    },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("coefficient matrix not normalized: |A|_F = {norm}")]
    Unnormalized { norm: f64 },

    #[error("density matrix trace {trace} deviates from 1")]
    TraceDeviation { trace: f64 },

    #[error("density matrix has eigenvalue {value:.3e} below clipping threshold")]
    NegativeEigenvalue { value: f64 },

    #[error("basis captures only {captured:.6} of the reference state norm")]
    BasisInsufficient { captured: f64 },

    #[error("subspace dimension {dim} exceeds limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("iterative solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("cache: {0}")]
    Cache(String),
}

impl Error {
    /// True for failures caused by the caller's parameters rather than the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_) | Error::Unnormalized { .. } | Error::DimensionTooLarge { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
