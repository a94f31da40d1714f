use super::matrix::{CMatrix, CVector, C64};
use crate::error::{Error, Result};

/// Full eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Columns are the unit eigenvectors, in the order of `values`.
    pub vectors: CMatrix,
}

/// Cyclic complex Jacobi. Returns the decomposition and the number of sweeps
/// used, or the partially diagonalized state if `max_sweeps` ran out.
fn jacobi(h: &CMatrix, max_sweeps: usize) -> (HermitianEigen, usize, bool) {
    let n = h.rows();
    let mut a = h.clone();
    let mut v = CMatrix::identity(n);
    let scale = h.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut converged = false;
    let mut sweeps = 0;

    while sweeps < max_sweeps {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-14 * scale {
            converged = true;
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let beta = a[(p, q)];
                let mag = beta.norm();
                if mag <= 1e-18 * scale {
                    continue;
                }
                let alpha = a[(p, p)].re;
                let gamma = a[(q, q)].re;
                let phase = beta / mag;
                let tau = (gamma - alpha) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G acts on columns p, q: [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
                let gpp = C64::new(c, 0.0);
                let gpq = C64::new(s, 0.0);
                let gqp = -phase.conj() * s;
                let gqq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * gpp + akq * gqp;
                    a[(k, q)] = akp * gpq + akq * gqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
                    a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * gpp + vkq * gqp;
                    v[(k, q)] = vkp * gpq + vkq * gqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.total_cmp(&a[(y, y)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    (HermitianEigen { values, vectors }, sweeps, converged)
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// Only the upper triangle's Hermitian part matters; the input is
/// symmetrized before diagonalization.
pub fn hermitian_eigen(h: &CMatrix) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::Argument("eigensolver needs a square matrix".into()));
    }
    let sym = CMatrix::from_fn(h.rows(), h.cols(), |i, j| {
        (h[(i, j)] + h[(j, i)].conj()) * 0.5
    });
    let (eig, sweeps, converged) = jacobi(&sym, 100);
    if !converged {
        let value = *eig.values.last().unwrap();
        return Err(Error::Convergence {
            iterations: sweeps,
            residual: f64::NAN,
            value,
            vector: eig.vectors.column(h.rows() - 1),
        });
    }
    Ok(eig)
}

/// Largest eigenvalue of a Hermitian matrix with a unit eigenvector.
///
/// Guarantees `‖hv − λv‖ ≤ tol·‖h‖₂`. `max_iters` bounds the number of
/// Jacobi sweeps.
pub fn top_eigenpair(h: &CMatrix, tol: f64, max_iters: usize) -> Result<(f64, CVector)> {
    if !h.is_square() {
        return Err(Error::Argument("eigensolver needs a square matrix".into()));
    }
    let scale = h.max_abs().max(1.0);
    let defect = h.hermitian_defect();
    if defect > tol.max(1e-14) * scale {
        return Err(Error::Argument(format!(
            "matrix is not Hermitian (defect {defect:e})"
        )));
    }
    let sym = CMatrix::from_fn(h.rows(), h.cols(), |i, j| {
        (h[(i, j)] + h[(j, i)].conj()) * 0.5
    });
    let (eig, sweeps, _) = jacobi(&sym, max_iters);
    let n = h.rows();
    let value = eig.values[n - 1];
    let mut vector = eig.vectors.column(n - 1);
    let norm = vector.norm();
    vector = vector.scale(C64::new(1.0 / norm, 0.0));

    let spectral = eig.values[0].abs().max(value.abs());
    let hv = h.matvec(&vector);
    let residual = hv
        .as_slice()
        .iter()
        .zip(vector.as_slice())
        .map(|(a, b)| (a - b * value).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if residual > tol * spectral && residual > 0.0 {
        return Err(Error::Convergence {
            iterations: sweeps,
            residual,
            value,
            vector,
        });
    }
    Ok((value, vector))
}
