use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::gram::{associated_matrix, AssociatedMatrix};
use super::span::check_match;
use super::triplet::Triplet;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, I, ONE};

/// An ordered pair `0 ≤ i0 < j0 ≤ 2n` of span symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairIndex {
    i0: usize,
    j0: usize,
}

impl PairIndex {
    pub fn new(i0: usize, j0: usize, n: usize) -> Result<Self> {
        if i0 >= j0 {
            return Err(Error::Argument(format!("pair ({i0}, {j0}) needs i0 < j0")));
        }
        if j0 > 2 * n {
            return Err(Error::Argument(format!(
                "pair ({i0}, {j0}) exceeds symbol range 0..={}",
                2 * n
            )));
        }
        Ok(PairIndex { i0, j0 })
    }

    pub fn i0(&self) -> usize {
        self.i0
    }

    pub fn j0(&self) -> usize {
        self.j0
    }

    /// All pairs in lexicographic order; `N(N−1)/2` of them.
    pub fn all(n: usize) -> Vec<PairIndex> {
        let sym = 2 * n + 1;
        (0..sym)
            .flat_map(|i0| (i0 + 1..sym).map(move |j0| PairIndex { i0, j0 }))
            .collect()
    }
}

impl Serialize for PairIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.i0, self.j0].serialize(s)
    }
}

impl<'de> Deserialize<'de> for PairIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [i0, j0] = <[usize; 2]>::deserialize(d)?;
        if i0 >= j0 {
            return Err(serde::de::Error::custom(format!(
                "pair ({i0}, {j0}) needs i0 < j0"
            )));
        }
        Ok(PairIndex { i0, j0 })
    }
}

/// One of the fourth roots of unity `ε^s = i^s`, `s ∈ {0, 1, 2, 3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FourthRoot(u8);

impl FourthRoot {
    pub const ALL: [FourthRoot; 4] = [FourthRoot(0), FourthRoot(1), FourthRoot(2), FourthRoot(3)];

    pub fn from_power(s: u8) -> Result<Self> {
        if s > 3 {
            return Err(Error::Argument(format!("root exponent {s} not in 0..=3")));
        }
        Ok(FourthRoot(s))
    }

    /// Recognizes `1, i, −1, −i` to within `1e−12`.
    pub fn from_value(z: C64) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|r| (r.value() - z).norm() <= 1e-12)
            .ok_or_else(|| Error::Argument(format!("{z} is not a fourth root of unity")))
    }

    pub fn power(&self) -> u8 {
        self.0
    }

    pub fn value(&self) -> C64 {
        match self.0 {
            0 => ONE,
            1 => I,
            2 => -ONE,
            _ => -I,
        }
    }
}

impl Serialize for FourthRoot {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.value().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FourthRoot {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let z = C64::deserialize(d)?;
        FourthRoot::from_value(z).map_err(serde::de::Error::custom)
    }
}

/// An elementary tensor-position triplet for `pair` and `eps`, scaled by the
/// per-vector weights `μ_a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementaryBlock {
    pub pair: PairIndex,
    pub eps: FourthRoot,
    pub weights: Vec<C64>,
}

impl ElementaryBlock {
    pub fn unit(pair: PairIndex, eps: FourthRoot, k: usize) -> Self {
        ElementaryBlock {
            pair,
            eps,
            weights: vec![ONE; k],
        }
    }

    /// `1` when `i = j`, `ε` at `(i0, j0)`, `conj(ε)` at `(j0, i0)`, else `0`.
    pub fn pattern(&self, i: usize, j: usize) -> C64 {
        if i == j {
            ONE
        } else if (i, j) == (self.pair.i0, self.pair.j0) {
            self.eps.value()
        } else if (i, j) == (self.pair.j0, self.pair.i0) {
            self.eps.value().conj()
        } else {
            C64::new(0.0, 0.0)
        }
    }

    /// `μ_a conj(μ_b) X^{α,ε}_{ia,jb}`.
    pub fn associated_matrix(&self, n: usize) -> AssociatedMatrix {
        let k = self.weights.len();
        let sym = 2 * n + 1;
        let m = CMatrix::from_fn(sym * k, sym * k, |p, q| {
            let (i, a) = (p / k, p % k);
            let (j, b) = (q / k, q % k);
            self.weights[a] * self.weights[b].conj() * self.pattern(i, j)
        });
        AssociatedMatrix::from_matrix(n, k, m)
    }
}

/// A triplet in tensor position, kept as a weighted direct sum of
/// elementary blocks. Its Gram data is computed blockwise; the ambient space
/// `K̃ ⊗ K̃` is never formed unless [`crate::construct::materialize`] is asked to.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TensorTriplet {
    n: usize,
    k: usize,
    /// Dimension of each tensor factor of an elementary block.
    m: usize,
    blocks: Vec<ElementaryBlock>,
}

impl TensorTriplet {
    pub fn new(n: usize, k: usize, m: usize, blocks: Vec<ElementaryBlock>) -> Result<Self> {
        if n == 0 || k == 0 || m == 0 {
            return Err(Error::Argument(format!(
                "invalid shape n={n}, k={k}, m={m}"
            )));
        }
        for b in &blocks {
            if b.weights.len() != k {
                return Err(Error::Argument(format!(
                    "block has {} weights, expected k = {k}",
                    b.weights.len()
                )));
            }
            if b.pair.j0 > 2 * n {
                return Err(Error::Argument(format!(
                    "block pair ({}, {}) out of range for n = {n}",
                    b.pair.i0, b.pair.j0
                )));
            }
            if b.weights
                .iter()
                .any(|w| !w.re.is_finite() || !w.im.is_finite())
            {
                return Err(Error::Argument("non-finite block weight".into()));
            }
        }
        Ok(TensorTriplet { n, k, m, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn blocks(&self) -> &[ElementaryBlock] {
        &self.blocks
    }

    pub fn blocks_mut(&mut self) -> &mut [ElementaryBlock] {
        &mut self.blocks
    }

    /// Side dimension of `K̃ = ⊕ K^α`.
    pub fn side_dim(&self) -> usize {
        self.blocks.len() * self.m
    }

    /// Dimension of `K̃ ⊗ K̃`, or `None` on overflow.
    pub fn ambient_dim(&self) -> Option<usize> {
        self.side_dim().checked_mul(self.side_dim())
    }

    /// `Σ_α μ_a^α conj(μ_b^α) X^α_{ia,jb}`.
    pub fn associated_matrix(&self) -> AssociatedMatrix {
        let (k, sym) = (self.k, 2 * self.n + 1);
        let mut diag = CMatrix::zeros(k, k);
        // off-diagonal contributions keyed by pair
        let mut off = vec![CMatrix::zeros(k, k); sym * sym];
        for blk in &self.blocks {
            let outer = CMatrix::from_fn(k, k, |a, b| blk.weights[a] * blk.weights[b].conj());
            diag = &diag + &outer;
            let eps = blk.eps.value();
            let (i0, j0) = (blk.pair.i0, blk.pair.j0);
            off[i0 * sym + j0] = &off[i0 * sym + j0] + &outer.scale(eps);
            off[j0 * sym + i0] = &off[j0 * sym + i0] + &outer.scale(eps.conj());
        }
        let mut m = CMatrix::zeros(sym * k, sym * k);
        for i in 0..sym {
            for j in 0..sym {
                let src = if i == j { &diag } else { &off[i * sym + j] };
                m.set_block(i * k, j * k, src);
            }
        }
        AssociatedMatrix::from_matrix(self.n, k, m)
    }
}

#[derive(Deserialize)]
struct TensorTripletRepr {
    n: usize,
    k: usize,
    m: usize,
    blocks: Vec<ElementaryBlock>,
}

impl<'de> Deserialize<'de> for TensorTriplet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = TensorTripletRepr::deserialize(d)?;
        TensorTriplet::new(r.n, r.k, r.m, r.blocks).map_err(serde::de::Error::custom)
    }
}

/// Lazy Gram data of a tensor-position witness.
pub fn associated_matrix_lazy(tt: &TensorTriplet) -> AssociatedMatrix {
    tt.associated_matrix()
}

/// True iff the Gram data of `t` and of `certificate` agree entrywise within `tol`.
pub fn verify_tensor_position(t: &Triplet, certificate: &TensorTriplet, tol: f64) -> Result<bool> {
    check_match(t.n(), t.k(), certificate.n(), certificate.k())?;
    let direct = associated_matrix(t);
    let lazy = certificate.associated_matrix();
    Ok(direct.max_abs_diff(&lazy)? <= tol)
}
