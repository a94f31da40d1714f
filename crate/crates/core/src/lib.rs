//! Constructive machinery for comparing the min and full free-group norms on
//! the generator span `span{1⊗1, U_i⊗1, 1⊗U_i}` of `C*(F_n) ⊗ C*(F_n)`.
//!
//! - [`linalg`]: dense complex primitives.
//! - [`model`]: span elements, witness triplets, Gram data, quadratic forms.
//! - [`construct`]: elementary tensor-position triplets, weighted direct sums
//!   and the polarization decomposition.
//! - [`norms`]: witness search for lower bounds and the certification chain
//!   `‖X‖_{C*(F_2n)}² ≤ (N²−N)·‖X‖_min²` on concrete witnesses.

pub mod construct;
pub mod error;
pub mod linalg;
pub mod model;
pub mod norms;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, C64};
pub use model::{
    AssociatedMatrix, ElementaryBlock, FourthRoot, PairIndex, QuadCoeffs, SpanElement,
    TensorTriplet, Triplet,
};
