use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::triplet::Triplet;
use crate::error::{Error, Result};
use crate::linalg::{complex_normal, CMatrix, C64, ZERO};

/// An element `X = Σ λ^i_{r,s} W_i ⊗ e_{r,s}` of `M_k ⊗ span{W_0, …, W_2n}`,
/// with `W_0` the identity.
#[derive(Clone, PartialEq, Debug)]
pub struct SpanElement {
    n: usize,
    k: usize,
    // [i][r][s], flattened
    coeffs: Vec<C64>,
}

impl SpanElement {
    pub fn zeros(n: usize, k: usize) -> Result<Self> {
        check_shape(n, k)?;
        Ok(SpanElement {
            n,
            k,
            coeffs: vec![ZERO; (2 * n + 1) * k * k],
        })
    }

    /// Builds from a coefficient function `f(i, r, s)` (zero-based indices).
    pub fn from_fn(
        n: usize,
        k: usize,
        mut f: impl FnMut(usize, usize, usize) -> C64,
    ) -> Result<Self> {
        let mut x = Self::zeros(n, k)?;
        for i in 0..=2 * n {
            for r in 0..k {
                for s in 0..k {
                    x.set(i, r, s, f(i, r, s));
                }
            }
        }
        x.check_finite()?;
        Ok(x)
    }

    /// Builds from nested `[i][r][s]` coefficients.
    pub fn from_nested(n: usize, k: usize, nested: Vec<Vec<Vec<C64>>>) -> Result<Self> {
        check_shape(n, k)?;
        if nested.len() != 2 * n + 1
            || nested
                .iter()
                .any(|m| m.len() != k || m.iter().any(|row| row.len() != k))
        {
            return Err(Error::Sizing(format!(
                "coefficients must be indexed [0..{}][0..{k}][0..{k}]",
                2 * n + 1
            )));
        }
        let x = SpanElement {
            n,
            k,
            coeffs: nested.into_iter().flatten().flatten().collect(),
        };
        x.check_finite()?;
        Ok(x)
    }

    /// `λ · W_i ⊗ e_{r,s}`.
    pub fn monomial(n: usize, k: usize, i: usize, r: usize, s: usize, value: C64) -> Result<Self> {
        if i > 2 * n || r >= k || s >= k {
            return Err(Error::Argument(format!(
                "monomial index ({i},{r},{s}) out of range"
            )));
        }
        let mut x = Self::zeros(n, k)?;
        x.set(i, r, s, value);
        x.check_finite()?;
        Ok(x)
    }

    /// `Σ_{i=0}^{2n} W_i` with `k = 1`.
    pub fn generator_sum(n: usize) -> Result<Self> {
        Self::from_fn(n, 1, |_, _, _| C64::new(1.0, 0.0))
    }

    /// Random element: each coefficient nonzero with probability `density`,
    /// nonzero entries complex standard normal.
    pub fn random<R: Rng + ?Sized>(n: usize, k: usize, density: f64, rng: &mut R) -> Result<Self> {
        if !(density > 0.0 && density <= 1.0) {
            return Err(Error::Argument(format!("density {density} not in (0, 1]")));
        }
        Self::from_fn(n, k, |_, _, _| {
            if rng.random::<f64>() < density {
                complex_normal(rng)
            } else {
                ZERO
            }
        })
    }

    fn check_finite(&self) -> Result<()> {
        if self
            .coeffs
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Argument(
                "span element has non-finite coefficients".into(),
            ));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of span symbols, `2n + 1`.
    pub fn symbols(&self) -> usize {
        2 * self.n + 1
    }

    pub fn coeff(&self, i: usize, r: usize, s: usize) -> C64 {
        self.coeffs[(i * self.k + r) * self.k + s]
    }

    fn set(&mut self, i: usize, r: usize, s: usize, value: C64) {
        self.coeffs[(i * self.k + r) * self.k + s] = value;
    }

    pub fn nonzero_count(&self) -> usize {
        self.coeffs.iter().filter(|z| **z != ZERO).count()
    }

    pub fn scale(&self, c: C64) -> SpanElement {
        SpanElement {
            n: self.n,
            k: self.k,
            coeffs: self.coeffs.iter().map(|&z| z * c).collect(),
        }
    }

    fn nested(&self) -> Vec<Vec<Vec<C64>>> {
        (0..self.symbols())
            .map(|i| {
                (0..self.k)
                    .map(|r| (0..self.k).map(|s| self.coeff(i, r, s)).collect())
                    .collect()
            })
            .collect()
    }
}

fn check_shape(n: usize, k: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Argument(format!(
            "need n >= 2 generators per factor, got {n}"
        )));
    }
    if k == 0 {
        return Err(Error::Argument("matrix size k must be positive".into()));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct SpanElementRepr {
    n: usize,
    k: usize,
    coeffs: Vec<Vec<Vec<C64>>>,
}

impl Serialize for SpanElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpanElementRepr {
            n: self.n,
            k: self.k,
            coeffs: self.nested(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpanElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SpanElementRepr::deserialize(d)?;
        SpanElement::from_nested(r.n, r.k, r.coeffs).map_err(serde::de::Error::custom)
    }
}

/// Coefficients of `X*X = Σ_{a,b} (Σ_{i≠j} A_{ia,jb} W_i* W_j + B_{a,b} Id) ⊗ e_{a,b}`.
#[derive(Clone, Debug)]
pub struct QuadCoeffs {
    n: usize,
    k: usize,
    /// `(N·k)²`, row `i·k + a`, column `j·k + b`; diagonal `i = j` blocks are zero.
    a: CMatrix,
    b: CMatrix,
}

impl QuadCoeffs {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn a(&self, i: usize, a: usize, j: usize, b: usize) -> C64 {
        self.a[(i * self.k + a, j * self.k + b)]
    }

    pub fn a_matrix(&self) -> &CMatrix {
        &self.a
    }

    pub fn b_matrix(&self) -> &CMatrix {
        &self.b
    }
}

/// Expands `X*X`:
/// `A_{ia,jb} = Σ_r conj(λ^i_{r,a}) λ^j_{r,b}` for `i ≠ j` and
/// `B_{a,b} = Σ_i Σ_r conj(λ^i_{r,a}) λ^i_{r,b}`.
pub fn quad_coeffs(x: &SpanElement) -> QuadCoeffs {
    let (n, k, sym) = (x.n, x.k, x.symbols());
    let mut a = CMatrix::zeros(sym * k, sym * k);
    let mut b = CMatrix::zeros(k, k);
    for i in 0..sym {
        for j in 0..sym {
            for ra in 0..k {
                for rb in 0..k {
                    let v: C64 = (0..k)
                        .map(|r| x.coeff(i, r, ra).conj() * x.coeff(j, r, rb))
                        .sum();
                    if i == j {
                        b[(ra, rb)] += v;
                    } else {
                        a[(i * k + ra, j * k + rb)] = v;
                    }
                }
            }
        }
    }
    QuadCoeffs { n, k, a, b }
}

/// The `(dim·k)`-square operator `Σ λ^i_{r,s} U_i ⊗ e_{r,s}`; block `(r, s)`
/// holds `Σ_i λ^i_{r,s} U_i`, matching the stacked vector `ξ = ⊕_a ξ_a`.
pub fn represent(x: &SpanElement, t: &Triplet) -> Result<CMatrix> {
    check_match(x.n, x.k, t.n(), t.k())?;
    let (k, dim) = (x.k, t.dim());
    let mut out = CMatrix::zeros(dim * k, dim * k);
    for r in 0..k {
        for s in 0..k {
            let mut block = CMatrix::zeros(dim, dim);
            for i in 0..x.symbols() {
                let c = x.coeff(i, r, s);
                if c == ZERO {
                    continue;
                }
                if i == 0 {
                    for d in 0..dim {
                        block[(d, d)] += c;
                    }
                } else {
                    block = &block + &t.unitary(i).scale(c);
                }
            }
            out.set_block(r * dim, s * dim, &block);
        }
    }
    Ok(out)
}

pub(crate) fn check_match(n1: usize, k1: usize, n2: usize, k2: usize) -> Result<()> {
    if n1 != n2 || k1 != k2 {
        return Err(Error::Argument(format!(
            "shape mismatch: (n, k) = ({n1}, {k1}) vs ({n2}, {k2})"
        )));
    }
    Ok(())
}
