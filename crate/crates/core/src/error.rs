use thiserror::Error;

use crate::linalg::CVector;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A dimension product overflowed or shapes did not line up.
    #[error("sizing error: {0}")]
    Sizing(String),

    /// Input violated an operation's precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// An iterative routine stopped before meeting its residual contract.
    /// The best iterate found is carried along.
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    Convergence {
        iterations: usize,
        residual: f64,
        value: f64,
        vector: CVector,
    },

    /// Input is singular or otherwise degenerate for the requested operation.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Materialization would exceed the allowed ambient dimension.
    #[error("ambient dimension {needed} exceeds capacity {cap}")]
    Capacity { needed: usize, cap: usize },

    /// A quantity that must be real came out with a significant imaginary part.
    #[error("numerical inconsistency: imaginary residue {0:e}")]
    NumericalInconsistency(f64),

    /// A postcondition that holds by construction was violated.
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
