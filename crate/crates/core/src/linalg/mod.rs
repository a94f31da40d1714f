//! Dense complex linear algebra: Kronecker products, direct sums, unitarity
//! checks, Hermitian eigensolving and polar retraction.
//!
//! Instances are small (dimensions up to a few hundred, occasionally a few
//! thousand for materialized tensor witnesses), so everything is dense and
//! row-major.

mod eigen;
mod matrix;
mod polar;
mod random;

pub use eigen::{hermitian_eigen, top_eigenpair, HermitianEigen};
pub use matrix::{CMatrix, CVector, C64, I, ONE, ZERO};
pub use polar::polar_unitary;
pub use random::{complex_normal, random_unit_vector, random_unitary};

use crate::error::{Error, Result};

/// Default tolerance for unitarity checks.
pub const UNITARY_TOL: f64 = 1e-10;

/// Kronecker product `a ⊗ b`, with `(a ⊗ b)(x ⊗ y) = ax ⊗ by`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let rows = a
        .rows()
        .checked_mul(b.rows())
        .ok_or_else(|| Error::Sizing("kron row count overflows".into()))?;
    let cols = a
        .cols()
        .checked_mul(b.cols())
        .ok_or_else(|| Error::Sizing("kron column count overflows".into()))?;
    rows.checked_mul(cols)
        .ok_or_else(|| Error::Sizing(format!("kron result {rows}x{cols} overflows")))?;
    let (br, bc) = (b.rows(), b.cols());
    Ok(CMatrix::from_fn(rows, cols, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    }))
}

/// Block-diagonal matrix from square blocks.
pub fn direct_sum(blocks: &[CMatrix]) -> Result<CMatrix> {
    if blocks.is_empty() {
        return Err(Error::Argument("direct sum of an empty list".into()));
    }
    if let Some(b) = blocks.iter().find(|b| !b.is_square()) {
        return Err(Error::Argument(format!(
            "direct sum block is {}x{}, not square",
            b.rows(),
            b.cols()
        )));
    }
    let total = blocks
        .iter()
        .try_fold(0usize, |acc, b| acc.checked_add(b.rows()))
        .ok_or_else(|| Error::Sizing("direct sum dimension overflows".into()))?;
    let mut out = CMatrix::zeros(total, total);
    let mut offset = 0;
    for b in blocks {
        out.set_block(offset, offset, b);
        offset += b.rows();
    }
    Ok(out)
}

/// True iff `m` is square and `max |(m*m - I)_ij| <= tol`.
pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    unitary_defect(m) <= tol
}

/// `max |(m*m - I)_ij|`, or infinity for non-square input.
pub fn unitary_defect(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let g = &m.adjoint() * m;
    g.max_abs_diff(&CMatrix::identity(m.rows()))
}
