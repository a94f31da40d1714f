use std::f64::consts::PI;

use crate::error::Result;
use crate::linalg::{kron, CMatrix, CVector, C64, ONE, ZERO};
use crate::model::{ElementaryBlock, FourthRoot, PairIndex, Triplet};

/// The factor data of an elementary triplet: unitaries `Ũ_1..Ũ_n` and
/// `Ṽ_1..Ṽ_n` on `K = C^m`, and the unit vector `η ∈ K ⊗ K`.
#[derive(Clone, Debug)]
pub struct ElementaryFactors {
    pub m: usize,
    pub left: Vec<CMatrix>,
    pub right: Vec<CMatrix>,
    pub eta: CVector,
}

impl ElementaryFactors {
    /// The triplet on `K ⊗ K` with `W̃_i = Ũ_i ⊗ Id` and `W̃_{n+i} = Id ⊗ Ṽ_i`.
    pub fn triplet(&self, k: usize) -> Result<Triplet> {
        let id = CMatrix::identity(self.m);
        let mut unitaries = Vec::with_capacity(self.left.len() * 2);
        for u in &self.left {
            unitaries.push(kron(u, &id)?);
        }
        for v in &self.right {
            unitaries.push(kron(&id, v)?);
        }
        Triplet::new(self.left.len(), unitaries, vec![self.eta.clone(); k])
    }
}

/// Per-side dimension used by every elementary triplet.
pub fn elementary_side_dim(n: usize) -> usize {
    n + 1
}

/// Unitary on `C^m` with `u e_0 = phase · e_p`: a transposition of `e_0` and
/// `e_p` with a phase on the first column.
fn sending_e0(m: usize, p: usize, phase: C64) -> CMatrix {
    let mut u = CMatrix::identity(m);
    if p != 0 {
        u[(0, 0)] = ZERO;
        u[(p, p)] = ZERO;
        u[(0, p)] = ONE;
    }
    u[(p, 0)] = phase;
    u
}

/// Assigns product-vector orbit targets on one side. `shared` lists the
/// (one or two) generator positions that must land on a common basis vector,
/// the second one carrying `conj(ε)`; every other generator gets its own
/// basis vector, none of them `e_0` unless `shared_on_e0`.
fn one_side(
    n: usize,
    m: usize,
    shared: Option<(usize, Option<usize>)>,
    eps: C64,
    shared_on_e0: bool,
) -> Vec<CMatrix> {
    let mut out = vec![CMatrix::identity(m); n];
    let mut next = 1;
    let shared_target = if shared_on_e0 { 0 } else { 1 };
    if let Some((first, second)) = shared {
        if !shared_on_e0 {
            next = 2;
        }
        match second {
            Some(second) => {
                out[first] = sending_e0(m, shared_target, ONE);
                out[second] = sending_e0(m, shared_target, eps.conj());
            }
            None => {
                out[first] = sending_e0(m, shared_target, eps.conj());
            }
        }
    }
    for (idx, slot) in out.iter_mut().enumerate() {
        let taken = shared.is_some_and(|(f, s)| f == idx || s == Some(idx));
        if !taken {
            *slot = sending_e0(m, next, ONE);
            next += 1;
        }
    }
    out
}

/// Generalized Pauli (clock and shift) matrix `X^p Z^q` on `C^d`.
fn weyl(d: usize, p: usize, q: usize) -> CMatrix {
    let omega = |e: usize| C64::from_polar(1.0, 2.0 * PI * (e % d) as f64 / d as f64);
    CMatrix::from_fn(
        d,
        d,
        |r, c| {
            if r == (c + p) % d {
                omega(q * c)
            } else {
                ZERO
            }
        },
    )
}

/// Builds the factors of the elementary triplet for `pair` and `eps`: orbit
/// vectors `W̃_i η` orthonormal except `W̃_{j0} η = conj(ε) W̃_{i0} η`.
pub fn elementary_factors(n: usize, pair: PairIndex, eps: FourthRoot) -> ElementaryFactors {
    let m = elementary_side_dim(n);
    let (i0, j0) = (pair.i0(), pair.j0());
    let e = eps.value();

    if i0 >= 1 && i0 <= n && j0 > n {
        return entangled_factors(n, i0, j0, e);
    }

    let mut eta = CVector::zeros(m * m);
    eta[0] = ONE;
    let (left, right) = if j0 <= n {
        // both on the left factor, possibly with the identity
        let shared = if i0 == 0 {
            (j0 - 1, None)
        } else {
            (i0 - 1, Some(j0 - 1))
        };
        (
            one_side(n, m, Some(shared), e, i0 == 0),
            one_side(n, m, None, e, false),
        )
    } else if i0 > n {
        (
            one_side(n, m, None, e, false),
            one_side(n, m, Some((i0 - n - 1, Some(j0 - n - 1))), e, false),
        )
    } else {
        // identity paired with a right generator: Ṽ_{j0−n} = conj(ε)·Id
        let mut right = one_side(n, m, Some((j0 - n - 1, None)), e, true);
        right[j0 - n - 1] = CMatrix::identity(m).scale(e.conj());
        (one_side(n, m, None, e, false), right)
    };
    ElementaryFactors {
        m,
        left,
        right,
        eta,
    }
}

/// A left generator `i0 ≥ 1` paired with a right generator `j0`. No product
/// vector works here: `W̃_{i0}η ∝ W̃_{j0}η` forces both onto `η` itself and
/// collides with `W̃_0 η`. Uses the maximally entangled `Ω` instead, where
/// `(Id ⊗ B)Ω = (Bᵀ ⊗ Id)Ω` turns every orbit vector into `(M ⊗ Id)Ω` and
/// orthogonality into Hilbert–Schmidt orthogonality of clock-and-shift
/// matrices.
fn entangled_factors(n: usize, i0: usize, j0: usize, eps: C64) -> ElementaryFactors {
    let d = elementary_side_dim(n);
    let mut pool = (0..d)
        .flat_map(|p| (0..d).map(move |q| (p, q)))
        .filter(|&pq| pq != (0, 0));
    let (sp, sq) = pool.next().unwrap();
    let shared = weyl(d, sp, sq);

    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    for g in 1..=2 * n {
        let mat = if g == i0 {
            shared.clone()
        } else if g == j0 {
            shared.scale(eps.conj())
        } else {
            let (p, q) = pool.next().unwrap();
            weyl(d, p, q)
        };
        if g <= n {
            left.push(mat);
        } else {
            right.push(mat.transpose());
        }
    }
    let mut eta = CVector::zeros(d * d);
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    for p in 0..d {
        eta[p * d + p] = amp;
    }
    ElementaryFactors {
        m: d,
        left,
        right,
        eta,
    }
}

/// Explicit elementary triplet in tensor position whose associated matrix has
/// ones on the diagonal, `ε` at `(i0, j0)`, `conj(ε)` at `(j0, i0)` and zeros
/// elsewhere, with all `k` vectors equal. Returned with its unit-weight block.
pub fn build_elementary(
    n: usize,
    k: usize,
    pair: PairIndex,
    eps: FourthRoot,
) -> Result<(Triplet, ElementaryBlock)> {
    // re-validate the pair against n
    let pair = PairIndex::new(pair.i0(), pair.j0(), n)?;
    let factors = elementary_factors(n, pair, eps);
    let triplet = factors.triplet(k)?;
    Ok((triplet, ElementaryBlock::unit(pair, eps, k)))
}
