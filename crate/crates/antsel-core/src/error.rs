//! Error type shared across the library.

use thiserror::Error;

/// Errors produced by the linear algebra kernels, the channel model, the
/// selection solver and the simulation harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not positive definite (pivot {pivot:.3e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("triangular matrix is singular (zero diagonal at index {0})")]
    SingularMatrix(usize),

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e} below threshold {threshold:.3e})")]
    NotPsd { eigenvalue: f64, threshold: f64 },

    #[error("least-squares system is rank deficient (condition estimate {0:.3e})")]
    RankDeficient(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("correlation coefficient phi must lie in [0, 1), got {0}")]
    InvalidPhi(f64),

    #[error("estimation variance tau must lie in [0, 1], got {0}")]
    InvalidTau(f64),

    #[error("noise variance must be positive, got {0}")]
    InvalidVariance(f64),

    #[error("sparsity k_s must lie in [1, {m}], got {k_s}")]
    InvalidSparsity { k_s: usize, m: usize },

    #[error("exhaustive search limited to m <= {limit}, got {m}")]
    TooLarge { m: usize, limit: usize },

    #[error("invalid sweep value {value} for axis {axis}: {reason}")]
    InvalidAxisValue {
        axis: &'static str,
        value: f64,
        reason: String,
    },

    #[error("unknown combining scheme `{0}`")]
    UnknownScheme(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
