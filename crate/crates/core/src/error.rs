//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by constructors and operations in this crate.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    /// Two operands (or an operand and a declared size) disagree on dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Input failed validation; the message names the violated invariant.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A matrix claimed Hermitian deviates from its adjoint beyond tolerance.
    #[error("matrix is not Hermitian: relative asymmetry {asymmetry:.3e}")]
    NotHermitian { asymmetry: f64 },

    /// A Choi matrix has a negative eigenvalue, so the map is not CP.
    #[error("not completely positive: min Choi eigenvalue {min_eigenvalue:.6e}")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    /// A certificate was requested in a mode whose precondition fails.
    #[error("mode precondition failed: {0}")]
    Mode(String),

    /// An affine map does not send the closed unit ball into itself.
    #[error("map is not ball-positive: max norm on the sphere is {max_norm}")]
    NotBallPositive { max_norm: f64 },
}

pub type Result<T> = std::result::Result<T, CoreError>;
