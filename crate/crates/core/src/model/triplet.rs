use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{unitary_defect, CMatrix, CVector, UNITARY_TOL};

/// A finite-dimensional Hilbert space `H = C^dim` with unitaries
/// `U_1, …, U_2n` and vectors `ξ_1, …, ξ_k`. `U_0 = Id` is implicit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Triplet {
    n: usize,
    k: usize,
    dim: usize,
    unitaries: Vec<CMatrix>,
    vectors: Vec<CVector>,
}

impl Triplet {
    /// Validates shapes and unitarity at [`UNITARY_TOL`].
    pub fn new(n: usize, unitaries: Vec<CMatrix>, vectors: Vec<CVector>) -> Result<Self> {
        Self::with_tolerance(n, unitaries, vectors, UNITARY_TOL)
    }

    pub fn with_tolerance(
        n: usize,
        unitaries: Vec<CMatrix>,
        vectors: Vec<CVector>,
        tol: f64,
    ) -> Result<Self> {
        let t = Self::from_parts_unchecked(n, unitaries, vectors)?;
        for (idx, u) in t.unitaries.iter().enumerate() {
            let defect = unitary_defect(u);
            if defect > tol {
                return Err(Error::Argument(format!(
                    "U_{} is not unitary (defect {defect:e} > {tol:e})",
                    idx + 1
                )));
            }
        }
        Ok(t)
    }

    /// Shape checks only; for constructions that are unitary by design and
    /// too large for an `O(dim³)` check.
    pub(crate) fn from_parts_unchecked(
        n: usize,
        unitaries: Vec<CMatrix>,
        vectors: Vec<CVector>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument(
                "need at least one generator per factor".into(),
            ));
        }
        if unitaries.len() != 2 * n {
            return Err(Error::Argument(format!(
                "expected {} unitaries, got {}",
                2 * n,
                unitaries.len()
            )));
        }
        if vectors.is_empty() {
            return Err(Error::Argument("need at least one vector".into()));
        }
        let dim = vectors[0].dim();
        if dim == 0 {
            return Err(Error::Argument("vectors must be non-empty".into()));
        }
        if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
            return Err(Error::Argument(format!(
                "vector of dimension {} in a dimension-{dim} triplet",
                v.dim()
            )));
        }
        if vectors.iter().any(|v| !v.is_finite()) {
            return Err(Error::Argument("non-finite vector entries".into()));
        }
        if let Some(u) = unitaries
            .iter()
            .find(|u| u.rows() != dim || u.cols() != dim)
        {
            return Err(Error::Argument(format!(
                "unitary of shape {}x{} in a dimension-{dim} triplet",
                u.rows(),
                u.cols()
            )));
        }
        Ok(Triplet {
            n,
            k: vectors.len(),
            dim,
            unitaries,
            vectors,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn symbols(&self) -> usize {
        2 * self.n + 1
    }

    /// `U_i` for `1 ≤ i ≤ 2n`.
    pub fn unitary(&self, i: usize) -> &CMatrix {
        assert!(i >= 1 && i <= 2 * self.n, "unitary index {i} out of range");
        &self.unitaries[i - 1]
    }

    pub fn unitaries(&self) -> &[CMatrix] {
        &self.unitaries
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn vector(&self, a: usize) -> &CVector {
        &self.vectors[a]
    }

    /// `U_i v`, with `U_0 = Id`.
    pub fn apply(&self, i: usize, v: &CVector) -> CVector {
        if i == 0 {
            v.clone()
        } else {
            self.unitary(i).matvec(v)
        }
    }

    /// Orbit vectors `U_i ξ_a`, indexed `[i][a]`.
    pub fn orbit(&self) -> Vec<Vec<CVector>> {
        (0..self.symbols())
            .map(|i| self.vectors.iter().map(|v| self.apply(i, v)).collect())
            .collect()
    }

    /// `Σ_a ‖ξ_a‖²`.
    pub fn total_norm_sqr(&self) -> f64 {
        self.vectors.iter().map(CVector::norm_sqr).sum()
    }

    /// The stacked vector `ξ = ⊕_a ξ_a`.
    pub fn stacked(&self) -> CVector {
        CVector::from(
            self.vectors
                .iter()
                .flat_map(|v| v.as_slice().iter().copied())
                .collect::<Vec<_>>(),
        )
    }

    /// Same unitaries, new vectors.
    pub fn with_vectors(&self, vectors: Vec<CVector>) -> Result<Self> {
        Self::from_parts_unchecked(self.n, self.unitaries.clone(), vectors)
    }
}

#[derive(Deserialize)]
struct TripletRepr {
    n: usize,
    k: usize,
    dim: usize,
    unitaries: Vec<CMatrix>,
    vectors: Vec<CVector>,
}

impl<'de> Deserialize<'de> for Triplet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = TripletRepr::deserialize(d)?;
        let t = Triplet::new(r.n, r.unitaries, r.vectors).map_err(serde::de::Error::custom)?;
        if t.k != r.k || t.dim != r.dim {
            return Err(serde::de::Error::custom(format!(
                "declared (k, dim) = ({}, {}) but data has ({}, {})",
                r.k, r.dim, t.k, t.dim
            )));
        }
        Ok(t)
    }
}

/// Haar-random unitaries with complex Gaussian vectors.
pub fn random_triplet<R: rand::Rng + ?Sized>(
    n: usize,
    k: usize,
    dim: usize,
    rng: &mut R,
) -> Result<Triplet> {
    let unitaries = (0..2 * n)
        .map(|_| crate::linalg::random_unitary(dim, rng))
        .collect();
    let vectors = (0..k)
        .map(|_| {
            CVector::from(
                (0..dim)
                    .map(|_| crate::linalg::complex_normal(rng))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    Triplet::from_parts_unchecked(n, unitaries, vectors)
}
