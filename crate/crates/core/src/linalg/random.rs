use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::{CMatrix, CVector, C64};

/// Complex standard normal: real and imaginary parts independent N(0, 1/2).
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-distributed unitary via Gram-Schmidt QR of a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let mut cols: Vec<Vec<C64>> = (0..dim)
        .map(|_| (0..dim).map(|_| complex_normal(rng)).collect())
        .collect();
    for j in 0..dim {
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for p in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let q = &done[p];
                let c: C64 = q.iter().zip(&rest[0]).map(|(a, b)| a.conj() * b).sum();
                for (x, &qa) in rest[0].iter_mut().zip(q) {
                    *x -= qa * c;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in cols[j].iter_mut() {
            *x /= norm;
        }
    }
    CMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

/// Uniformly distributed unit vector.
pub fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
    let v: Vec<C64> = (0..dim).map(|_| complex_normal(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    CVector::from(v.into_iter().map(|z| z / norm).collect::<Vec<_>>())
}
