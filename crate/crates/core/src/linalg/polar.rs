use super::eigen::hermitian_eigen;
use super::matrix::{CMatrix, C64};
use crate::error::{Error, Result};

/// Relative singular-value floor below which the input counts as rank-deficient.
const RANK_TOL: f64 = 1e-10;

/// Unitary factor `U` of the polar decomposition `m = U·P`, i.e. the nearest
/// unitary to `m` in Frobenius norm.
pub fn polar_unitary(m: &CMatrix) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::Argument(format!(
            "polar decomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let gram = &m.adjoint() * m;
    let eig = hermitian_eigen(&gram)?;
    let top = eig.values[n - 1].max(0.0).sqrt();
    let bottom = eig.values[0].max(0.0).sqrt();
    if top == 0.0 || bottom < RANK_TOL * top {
        return Err(Error::Degenerate(format!(
            "matrix is rank-deficient (singular values {bottom:e} / {top:e})"
        )));
    }
    // P^{-1} = V diag(1/σ) V*
    let inv_sigma: Vec<C64> = eig
        .values
        .iter()
        .map(|&v| C64::new(1.0 / v.sqrt(), 0.0))
        .collect();
    let p_inv = &(&eig.vectors * &CMatrix::from_diag(&inv_sigma)) * &eig.vectors.adjoint();
    let mut u = m * &p_inv;

    // Newton-Schulz polish: U <- U (3I - U*U) / 2
    for _ in 0..2 {
        let g = &u.adjoint() * &u;
        let corr = CMatrix::from_fn(n, n, |i, j| {
            let id = if i == j { 3.0 } else { 0.0 };
            (C64::new(id, 0.0) - g[(i, j)]) * 0.5
        });
        u = &u * &corr;
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{complex_normal, is_unitary, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_input_is_fixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = random_unitary(4, &mut rng);
        assert!(polar_unitary(&u).unwrap().max_abs_diff(&u) < 1e-12);
    }

    #[test]
    fn positive_scaling_is_removed() {
        let m = CMatrix::identity(3).scale(C64::new(2.0, 0.0));
        assert!(
            polar_unitary(&m)
                .unwrap()
                .max_abs_diff(&CMatrix::identity(3))
                < 1e-12
        );
    }

    #[test]
    fn nearest_unitary_beats_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..10 {
            let m = CMatrix::from_fn(3, 3, |_, _| complex_normal(&mut rng));
            let u = polar_unitary(&m).unwrap();
            assert!(is_unitary(&u, 1e-10));
            let best = (&m - &u).frobenius_norm();
            for _ in 0..10 {
                let v = random_unitary(3, &mut rng);
                assert!(best <= (&m - &v).frobenius_norm() + 1e-12);
            }
        }
    }

    #[test]
    fn rank_deficient_is_rejected() {
        let m = CMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(matches!(polar_unitary(&m), Err(Error::Degenerate(_))));
        assert!(matches!(
            polar_unitary(&CMatrix::zeros(2, 2)),
            Err(Error::Degenerate(_))
        ));
    }
}
