//! Span elements, witness triplets, tensor-position triplets, associated
//! matrices, and the quadratic forms that connect them.
//!
//! Conventions:
//! - symbol `i = 0` is the identity; `U_0` is never stored.
//! - inner products are linear in the first slot: `<x, y> = Σ_t x_t conj(y_t)`.
//! - the stacked vector is `ξ = ⊕_a ξ_a`, block `a` of size `dim`, and
//!   `e_{r,s}` acts on the block index.
//! - Gram data is indexed `(i·k + a, j·k + b)`.

mod gram;
mod span;
mod tensor;
mod triplet;

pub use gram::{associated_matrix, quad_form, quad_form_gram, AssociatedMatrix, IMAG_REJECT};
pub use span::{quad_coeffs, represent, QuadCoeffs, SpanElement};
pub use tensor::{
    associated_matrix_lazy, verify_tensor_position, ElementaryBlock, FourthRoot, PairIndex,
    TensorTriplet,
};
pub use triplet::{random_triplet, Triplet};
