use serde::Serialize;

use super::span::{check_match, QuadCoeffs};
use super::triplet::Triplet;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix, C64, ZERO};

/// Imaginary residue above which a quadratic form is rejected, relative to
/// `max(1, |value|)`.
pub const IMAG_REJECT: f64 = 1e-6;

/// Gram data `X_{ia,jb} = <U_i η_a, U_j η_b>`, stored as an `(N·k)`-square
/// matrix with row `i·k + a` and column `j·k + b`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssociatedMatrix {
    n: usize,
    k: usize,
    matrix: CMatrix,
}

impl AssociatedMatrix {
    pub(crate) fn from_matrix(n: usize, k: usize, matrix: CMatrix) -> Self {
        debug_assert_eq!(matrix.rows(), (2 * n + 1) * k);
        AssociatedMatrix { n, k, matrix }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn symbols(&self) -> usize {
        2 * self.n + 1
    }

    pub fn get(&self, i: usize, a: usize, j: usize, b: usize) -> C64 {
        self.matrix[(i * self.k + a, j * self.k + b)]
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn scale(&self, c: f64) -> AssociatedMatrix {
        AssociatedMatrix {
            n: self.n,
            k: self.k,
            matrix: self.matrix.scale(C64::new(c, 0.0)),
        }
    }

    pub fn max_abs_diff(&self, other: &AssociatedMatrix) -> Result<f64> {
        check_match(self.n, self.k, other.n, other.k)?;
        Ok(self.matrix.max_abs_diff(&other.matrix))
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(hermitian_eigen(&self.matrix)?.values[0])
    }

    /// Largest deviation of the `(i, i)` blocks from the `(0, 0)` block.
    pub fn diagonal_block_spread(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 1..self.symbols() {
            for a in 0..self.k {
                for b in 0..self.k {
                    worst = worst.max((self.get(i, a, i, b) - self.get(0, a, 0, b)).norm());
                }
            }
        }
        worst
    }

    /// Largest deviation over `i ≠ j` entries and over the diagonal blocks
    /// against `other` with its diagonal blocks divided by `diag_scale`.
    pub fn compare_split(&self, other: &AssociatedMatrix, diag_scale: f64) -> Result<(f64, f64)> {
        check_match(self.n, self.k, other.n, other.k)?;
        let (mut off, mut diag) = (0.0f64, 0.0f64);
        for i in 0..self.symbols() {
            for j in 0..self.symbols() {
                for a in 0..self.k {
                    for b in 0..self.k {
                        let mine = self.get(i, a, j, b);
                        let theirs = other.get(i, a, j, b);
                        if i == j {
                            diag = diag.max((mine * diag_scale - theirs).norm());
                        } else {
                            off = off.max((mine - theirs).norm());
                        }
                    }
                }
            }
        }
        Ok((off, diag))
    }
}

/// Exact inner products `<U_i ξ_a, U_j ξ_b>` with `U_0 = Id`.
pub fn associated_matrix(t: &Triplet) -> AssociatedMatrix {
    let (k, sym) = (t.k(), t.symbols());
    let orbit = t.orbit();
    let mut m = CMatrix::zeros(sym * k, sym * k);
    for i in 0..sym {
        for a in 0..k {
            for j in 0..sym {
                for b in 0..k {
                    let p = i * k + a;
                    let q = j * k + b;
                    if q < p {
                        m[(p, q)] = m[(q, p)].conj();
                    } else if p == q {
                        m[(p, q)] = C64::new(orbit[i][a].norm_sqr(), 0.0);
                    } else {
                        m[(p, q)] = orbit[i][a].inner(&orbit[j][b]);
                    }
                }
            }
        }
    }
    AssociatedMatrix::from_matrix(t.n(), k, m)
}

/// `<X*X ξ, ξ> = Σ_{a,b} (Σ_{i≠j} A_{ia,jb} <U_j ξ_b, U_i ξ_a> + B_{a,b} <ξ_b, ξ_a>)`.
pub fn quad_form(q: &QuadCoeffs, t: &Triplet) -> Result<f64> {
    check_match(q.n(), q.k(), t.n(), t.k())?;
    let orbit = t.orbit();
    let (k, sym) = (t.k(), t.symbols());
    let mut total = ZERO;
    for i in 0..sym {
        for j in 0..sym {
            if i == j {
                continue;
            }
            for a in 0..k {
                for b in 0..k {
                    let c = q.a(i, a, j, b);
                    if c != ZERO {
                        total += c * orbit[j][b].inner(&orbit[i][a]);
                    }
                }
            }
        }
    }
    for a in 0..k {
        for b in 0..k {
            total += q.b_matrix()[(a, b)] * t.vector(b).inner(t.vector(a));
        }
    }
    real_part(total)
}

/// Same value as [`quad_form`], from Gram data only:
/// `Σ A_{ia,jb} G_{jb,ia} + Σ B_{a,b} G_{0b,0a}`.
pub fn quad_form_gram(q: &QuadCoeffs, g: &AssociatedMatrix) -> Result<f64> {
    check_match(q.n(), q.k(), g.n(), g.k())?;
    let (k, sym) = (g.k(), g.symbols());
    let mut total = ZERO;
    for i in 0..sym {
        for j in 0..sym {
            if i == j {
                continue;
            }
            for a in 0..k {
                for b in 0..k {
                    total += q.a(i, a, j, b) * g.get(j, b, i, a);
                }
            }
        }
    }
    for a in 0..k {
        for b in 0..k {
            total += q.b_matrix()[(a, b)] * g.get(0, b, 0, a);
        }
    }
    real_part(total)
}

fn real_part(z: C64) -> Result<f64> {
    if z.im.abs() > IMAG_REJECT * z.re.abs().max(1.0) {
        return Err(Error::NumericalInconsistency(z.im));
    }
    Ok(z.re)
}
