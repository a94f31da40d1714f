use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{direct_sum, kron, CMatrix, CVector};
use crate::model::{FourthRoot, PairIndex, TensorTriplet, Triplet};

use super::elementary::{elementary_factors, elementary_side_dim, ElementaryFactors};

/// Concrete triplet on `K̃ ⊗ K̃` with `K̃ = ⊕_α K^α`, `Ũ_i = ⊕_α Ũ_i^α`,
/// `W̃_i = Ũ_i ⊗ Id` or `Id ⊗ Ṽ_{i−n}`, and `η̃_a = ⊕_α μ_a^α η^α` placed in
/// the diagonal blocks `K^α ⊗ K^α`.
///
/// Fails with [`Error::Capacity`] when `(Σ_α dim K^α)²` exceeds `cap`.
pub fn materialize(tt: &TensorTriplet, cap: usize) -> Result<Triplet> {
    let (n, k, m) = (tt.n(), tt.k(), tt.m());
    if m != elementary_side_dim(n) {
        return Err(Error::Argument(format!(
            "block side dimension {m} does not match the elementary construction ({})",
            elementary_side_dim(n)
        )));
    }
    if tt.blocks().is_empty() {
        return Err(Error::Argument(
            "cannot materialize an empty direct sum".into(),
        ));
    }
    let side = tt.side_dim();
    let ambient = side.checked_mul(side).ok_or(Error::Capacity {
        needed: usize::MAX,
        cap,
    })?;
    if ambient > cap {
        return Err(Error::Capacity {
            needed: ambient,
            cap,
        });
    }

    let mut cache: HashMap<(PairIndex, FourthRoot), ElementaryFactors> = HashMap::new();
    let factors: Vec<&ElementaryFactors> = {
        for b in tt.blocks() {
            cache
                .entry((b.pair, b.eps))
                .or_insert_with(|| elementary_factors(n, b.pair, b.eps));
        }
        tt.blocks()
            .iter()
            .map(|b| &cache[&(b.pair, b.eps)])
            .collect()
    };

    let id = CMatrix::identity(side);
    let mut unitaries = Vec::with_capacity(2 * n);
    for g in 0..n {
        let blocks: Vec<CMatrix> = factors.iter().map(|f| f.left[g].clone()).collect();
        unitaries.push(kron(&direct_sum(&blocks)?, &id)?);
    }
    for g in 0..n {
        let blocks: Vec<CMatrix> = factors.iter().map(|f| f.right[g].clone()).collect();
        unitaries.push(kron(&id, &direct_sum(&blocks)?)?);
    }

    let mut vectors = vec![CVector::zeros(ambient); k];
    for (alpha, (blk, f)) in tt.blocks().iter().zip(&factors).enumerate() {
        let base = alpha * m;
        for p in 0..m {
            for q in 0..m {
                let amp = f.eta[p * m + q];
                if amp.norm() == 0.0 {
                    continue;
                }
                let idx = (base + p) * side + (base + q);
                for (a, v) in vectors.iter_mut().enumerate() {
                    v[idx] = blk.weights[a] * amp;
                }
            }
        }
    }
    Triplet::from_parts_unchecked(n, unitaries, vectors)
}
