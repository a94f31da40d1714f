use crate::error::Result;
use crate::linalg::{C64, ZERO};
use crate::model::{
    associated_matrix, ElementaryBlock, FourthRoot, PairIndex, TensorTriplet, Triplet,
};

use super::elementary::elementary_side_dim;

/// Blocks whose weights all fall below this modulus are dropped.
pub const PRUNE_TOL: f64 = 1e-14;

/// Components `λ^t_{i,a}` of the orbit vectors `U_i ξ_a` in the standard basis.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitComponents {
    n: usize,
    k: usize,
    dim: usize,
    // [i][a][t]
    data: Vec<C64>,
}

impl OrbitComponents {
    pub fn of(t: &Triplet) -> Self {
        let (n, k, dim) = (t.n(), t.k(), t.dim());
        let data = t
            .orbit()
            .into_iter()
            .flatten()
            .flat_map(|v| v.into_vec())
            .collect();
        OrbitComponents { n, k, dim, data }
    }

    pub fn get(&self, i: usize, a: usize, t: usize) -> C64 {
        self.data[(i * self.k + a) * self.dim + t]
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
}

/// Polarization weights `μ_a^{α,s,t} = (λ^t_{i,a} + i^s λ^t_{j,a}) / 2` for
/// every pair `α = (i, j)`, `s ∈ 0..4` and basis index `t`.
///
/// With the factor ½, `Σ_{t,s} i^s μ_a conj(μ_b) = <U_i ξ_a, U_j ξ_b>` and
/// `Σ_{t,s} μ_a conj(μ_b) = 2<ξ_a, ξ_b>`.
#[derive(Clone, Debug)]
pub struct WeightTensor {
    n: usize,
    k: usize,
    dim: usize,
    pairs: Vec<PairIndex>,
    // [α][s][t][a]
    data: Vec<C64>,
}

impl WeightTensor {
    pub fn from_components(c: &OrbitComponents) -> Self {
        let pairs = PairIndex::all(c.n);
        let mut data = Vec::with_capacity(pairs.len() * 4 * c.dim * c.k);
        for p in &pairs {
            for s in FourthRoot::ALL {
                let e = s.value();
                for t in 0..c.dim {
                    for a in 0..c.k {
                        data.push((c.get(p.i0(), a, t) + e * c.get(p.j0(), a, t)) * 0.5);
                    }
                }
            }
        }
        WeightTensor {
            n: c.n,
            k: c.k,
            dim: c.dim,
            pairs,
            data,
        }
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

    pub fn pairs(&self) -> &[PairIndex] {
        &self.pairs
    }

    /// Weights `μ_1..μ_k` for pair number `alpha`, root `s`, basis index `t`.
    pub fn weights(&self, alpha: usize, s: usize, t: usize) -> &[C64] {
        let start = ((alpha * 4 + s) * self.dim + t) * self.k;
        &self.data[start..start + self.k]
    }

    /// `Σ_{α,s,t} |μ_a|²` for each `a`.
    pub fn norm_sqr_per_vector(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.k];
        for chunk in self.data.chunks(self.k) {
            for (o, w) in out.iter_mut().zip(chunk) {
                *o += w.norm_sqr();
            }
        }
        out
    }
}

pub fn polarization_weights(t: &Triplet) -> WeightTensor {
    WeightTensor::from_components(&OrbitComponents::of(t))
}

#[derive(Clone, Copy, Debug)]
pub struct DecomposeOptions {
    /// Drop blocks with `max_a |μ_a| < PRUNE_TOL`.
    pub prune: bool,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions { prune: true }
    }
}

/// Turns any finite-dimensional witness into a tensor-position witness whose
/// Gram data keeps every `i ≠ j` entry and multiplies the diagonal blocks by
/// `N² − N`. One block per `(α, s, t)`, in that order.
pub fn decompose(t: &Triplet) -> TensorTriplet {
    decompose_with(t, DecomposeOptions::default())
}

pub fn decompose_with(t: &Triplet, opts: DecomposeOptions) -> TensorTriplet {
    decompose_components(&OrbitComponents::of(t), opts)
}

/// The decomposition depends on the witness only through its orbit components.
pub fn decompose_components(c: &OrbitComponents, opts: DecomposeOptions) -> TensorTriplet {
    let w = WeightTensor::from_components(c);
    let mut blocks = Vec::with_capacity(w.pairs.len() * 4 * w.dim);
    for (alpha, &pair) in w.pairs.iter().enumerate() {
        for s in FourthRoot::ALL {
            for t in 0..w.dim {
                let weights = w.weights(alpha, s.power() as usize, t);
                if opts.prune && weights.iter().all(|z| z.norm() < PRUNE_TOL) {
                    continue;
                }
                blocks.push(ElementaryBlock {
                    pair,
                    eps: s,
                    weights: weights.to_vec(),
                });
            }
        }
    }
    TensorTriplet::new(w.n, w.k, elementary_side_dim(w.n), blocks)
        .expect("decomposition blocks are well-formed")
}

/// Largest deviations of `certificate` from the decomposition contract
/// against `t`: `(max over i ≠ j, max over diagonal blocks after dividing by N² − N)`.
pub fn decomposition_deviation(t: &Triplet, certificate: &TensorTriplet) -> Result<(f64, f64)> {
    let sym = t.symbols() as f64;
    associated_matrix(t).compare_split(&certificate.associated_matrix(), sym * sym - sym)
}

/// `Σ_{α,s,t} i^s μ_a conj(μ_b)` and `Σ_{α,s,t} μ_a conj(μ_b)` restricted to
/// one pair. Exposed for checking the polarization identities.
pub fn pair_sums(w: &WeightTensor, alpha: usize, a: usize, b: usize) -> (C64, C64) {
    let (mut twisted, mut plain) = (ZERO, ZERO);
    for s in FourthRoot::ALL {
        for t in 0..w.dim {
            let mu = w.weights(alpha, s.power() as usize, t);
            let prod = mu[a] * mu[b].conj();
            twisted += s.value() * prod;
            plain += prod;
        }
    }
    (twisted, plain)
}
