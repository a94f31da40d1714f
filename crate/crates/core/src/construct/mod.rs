//! Elementary tensor-position triplets, their weighted direct sums, and the
//! polarization decomposition of an arbitrary witness into such a sum.

mod decompose;
mod elementary;
mod materialize;

pub use decompose::{
    decompose, decompose_components, decompose_with, decomposition_deviation, pair_sums,
    polarization_weights, DecomposeOptions, OrbitComponents, WeightTensor, PRUNE_TOL,
};
pub use elementary::{
    build_elementary, elementary_factors, elementary_side_dim, ElementaryFactors,
};
pub use materialize::materialize;

use crate::error::Result;
use crate::model::{ElementaryBlock, TensorTriplet};

/// Lazy weighted direct sum of elementary blocks sharing `n` and `k`.
pub fn weighted_direct_sum(
    n: usize,
    k: usize,
    blocks: Vec<ElementaryBlock>,
) -> Result<TensorTriplet> {
    TensorTriplet::new(n, k, elementary_side_dim(n), blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{complex_normal, is_unitary, CMatrix, CVector, C64, ONE, ZERO};
    use crate::model::{
        associated_matrix, random_triplet, verify_tensor_position, FourthRoot, PairIndex, Triplet,
    };
    use crate::Error;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn root(s: u8) -> FourthRoot {
        FourthRoot::from_power(s).unwrap()
    }

    /// Entry of the elementary pattern, written out independently.
    fn expected_entry(i: usize, j: usize, i0: usize, j0: usize, eps: C64) -> C64 {
        if i == j {
            ONE
        } else if i == i0 && j == j0 {
            eps
        } else if i == j0 && j == i0 {
            eps.conj()
        } else {
            ZERO
        }
    }

    #[test]
    fn elementary_mixed_pair() {
        let n = 2;
        let (t, _) = build_elementary(n, 1, PairIndex::new(1, 4, n).unwrap(), root(1)).unwrap();
        let g = associated_matrix(&t);
        assert!((g.get(1, 0, 4, 0) - c(0.0, 1.0)).norm() < 1e-12);
        assert!((g.get(4, 0, 1, 0) - c(0.0, -1.0)).norm() < 1e-12);
        for i in 0..5 {
            for j in 0..5 {
                assert!(
                    (g.get(i, 0, j, 0) - expected_entry(i, j, 1, 4, c(0.0, 1.0))).norm() < 1e-12
                );
            }
        }
    }

    #[test]
    fn elementary_with_identity_on_left() {
        let n = 2;
        let (t, _) = build_elementary(n, 1, PairIndex::new(0, 2, n).unwrap(), root(0)).unwrap();
        let g = associated_matrix(&t);
        for i in 0..5 {
            for j in 0..5 {
                assert!((g.get(i, 0, j, 0) - expected_entry(i, j, 0, 2, ONE)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn elementary_right_pair_self_certifies() {
        let n = 2;
        let pair = PairIndex::new(3, 4, n).unwrap();
        let (t, blk) = build_elementary(n, 2, pair, root(2)).unwrap();
        let cert = weighted_direct_sum(n, 2, vec![blk]).unwrap();
        assert!(verify_tensor_position(&t, &cert, 1e-12).unwrap());
    }

    #[test]
    fn elementary_exact_for_every_pair_and_root() {
        for n in 2..=4 {
            for pair in PairIndex::all(n) {
                for eps in FourthRoot::ALL {
                    let (t, blk) = build_elementary(n, 2, pair, eps).unwrap();
                    assert_eq!(t.dim(), (n + 1) * (n + 1));
                    assert!(t.unitaries().iter().all(|u| is_unitary(u, 1e-12)));
                    assert!((t.vector(0).norm() - 1.0).abs() < 1e-12);
                    let g = associated_matrix(&t);
                    let want = blk.associated_matrix(n);
                    assert!(
                        g.max_abs_diff(&want).unwrap() < 1e-12,
                        "n={n} pair={pair:?} eps={eps:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn elementary_unitaries_have_tensor_form() {
        let n = 3;
        let (t, _) = build_elementary(n, 1, PairIndex::new(2, 5, n).unwrap(), root(3)).unwrap();
        let f = elementary_factors(n, PairIndex::new(2, 5, n).unwrap(), root(3));
        let id = CMatrix::identity(f.m);
        for g in 0..n {
            assert_eq!(
                t.unitary(g + 1),
                &crate::linalg::kron(&f.left[g], &id).unwrap()
            );
            assert_eq!(
                t.unitary(n + g + 1),
                &crate::linalg::kron(&id, &f.right[g]).unwrap()
            );
        }
    }

    #[test]
    fn polarization_of_orthogonal_pair() {
        // ξ = e_0, U_1 ξ = e_1: at t = 0, λ_0 = 1 and λ_1 = 0
        let flip = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let t = Triplet::new(
            2,
            vec![
                flip,
                CMatrix::identity(2),
                CMatrix::identity(2),
                CMatrix::identity(2),
            ],
            vec![CVector::basis(2, 0)],
        )
        .unwrap();
        let w = polarization_weights(&t);
        assert_eq!(w.pairs()[0], PairIndex::new(0, 1, 2).unwrap());
        for s in 0..4 {
            assert!((w.weights(0, s, 0)[0] - c(0.5, 0.0)).norm() < 1e-15);
        }
        // Σ_s i^s · ¼ = 0 = λ_0 conj(λ_1) at t = 0, and <ξ, U_1 ξ> = 0 overall
        let (twisted, plain) = pair_sums(&w, 0, 0, 0);
        assert!(twisted.norm() < 1e-15);
        assert!((plain - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn polarization_of_parallel_pair() {
        // λ_i = λ_j = 1: Σ_s i^s |1 + i^s|² / 4 = 1
        let t = Triplet::new(
            2,
            vec![CMatrix::identity(1); 4],
            vec![CVector::from(vec![ONE])],
        )
        .unwrap();
        let w = polarization_weights(&t);
        let by_hand: C64 = FourthRoot::ALL
            .iter()
            .map(|s| s.value() * (ONE + s.value()).norm_sqr() / 4.0)
            .sum();
        assert!((by_hand - ONE).norm() < 1e-15);
        let (twisted, _) = pair_sums(&w, 0, 0, 0);
        assert!((twisted - ONE).norm() < 1e-15);
    }

    #[test]
    fn polarization_identities_on_random_triplets() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..40 {
            let n = 2 + trial % 2;
            let k = 1 + trial % 3;
            let dim = 1 + trial % 4;
            let t = random_triplet(n, k, dim, &mut rng).unwrap();
            let g = associated_matrix(&t);
            let w = polarization_weights(&t);
            for (alpha, p) in w.pairs().iter().enumerate() {
                for a in 0..k {
                    for b in 0..k {
                        let (twisted, plain) = pair_sums(&w, alpha, a, b);
                        assert!((twisted - g.get(p.i0(), a, p.j0(), b)).norm() < 1e-12);
                        assert!((plain - g.get(0, a, 0, b) * 2.0).norm() < 1e-12);
                    }
                }
            }
            let sym = (2 * n + 1) as f64;
            for (a, total) in w.norm_sqr_per_vector().into_iter().enumerate() {
                let expect = (sym * sym - sym) * t.vector(a).norm_sqr();
                assert!((total - expect).abs() < 1e-10 * expect.max(1.0));
            }
        }
    }

    #[test]
    fn decompose_trivial_rep() {
        let t = Triplet::new(
            2,
            vec![CMatrix::identity(1); 4],
            vec![CVector::from(vec![ONE])],
        )
        .unwrap();
        let tt = decompose_with(&t, DecomposeOptions { prune: false });
        assert_eq!(tt.blocks().len(), 40);
        let g = tt.associated_matrix();
        for i in 0..5 {
            for j in 0..5 {
                let want = if i == j { 20.0 } else { 1.0 };
                assert!((g.get(i, 0, j, 0) - c(want, 0.0)).norm() < 1e-12);
            }
        }
        // pruning removes the blocks with (1 + i^s·1)/2 = 0, i.e. s = 2
        assert_eq!(decompose(&t).blocks().len(), 30);
    }

    #[test]
    fn decompose_with_zero_vector() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let base = random_triplet(2, 2, 3, &mut rng).unwrap();
        let t = base
            .with_vectors(vec![base.vector(0).clone(), CVector::zeros(3)])
            .unwrap();
        let tt = decompose(&t);
        let g = tt.associated_matrix();
        let direct = associated_matrix(&t);
        for i in 0..5 {
            for j in 0..5 {
                for a in 0..2 {
                    assert_eq!(g.get(i, a, j, 1), ZERO);
                    assert_eq!(g.get(j, 1, i, a), ZERO);
                }
            }
            assert!((g.get(i, 0, i, 0) - direct.get(0, 0, 0, 0) * 20.0).norm() < 1e-10);
        }
    }

    #[test]
    fn decompose_postconditions_on_random_triplets() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for trial in 0..30 {
            let n = 2 + trial % 2;
            let k = 1 + trial % 3;
            let dim = 1 + trial % 4;
            let t = random_triplet(n, k, dim, &mut rng).unwrap();
            let full = decompose_with(&t, DecomposeOptions { prune: false });
            let sym = 2 * n + 1;
            assert_eq!(full.blocks().len(), dim * 4 * sym * (sym - 1) / 2);
            let (off, diag) = decomposition_deviation(&t, &full).unwrap();
            assert!(off < 1e-10 && diag < 1e-10, "off {off:e} diag {diag:e}");
            let pruned = decompose(&t);
            let (off, diag) = decomposition_deviation(&t, &pruned).unwrap();
            assert!(off < 1e-10 && diag < 1e-10);
        }
    }

    #[test]
    fn decompose_reads_only_orbit_components() {
        // same orbit of ξ = e_0 under two different sets of unitaries
        let n = 2;
        let dim = 2;
        let phase = |z: C64| CMatrix::from_diag(&[ONE, z]);
        let t1 = Triplet::new(n, vec![phase(ONE); 4], vec![CVector::basis(dim, 0)]).unwrap();
        let t2 = Triplet::new(
            n,
            vec![
                phase(c(0.0, 1.0)),
                phase(-ONE),
                phase(c(0.6, 0.8)),
                phase(c(0.0, -1.0)),
            ],
            vec![CVector::basis(dim, 0)],
        )
        .unwrap();
        assert_ne!(t1, t2);
        assert_eq!(OrbitComponents::of(&t1), OrbitComponents::of(&t2));
        assert_eq!(decompose(&t1), decompose(&t2));
    }

    #[test]
    fn weighted_direct_sum_scales_by_weights() {
        let n = 2;
        let pair = PairIndex::new(1, 3, n).unwrap();
        let blk = ElementaryBlock::unit(pair, root(1), 1);
        let one = weighted_direct_sum(n, 1, vec![blk.clone()]).unwrap();
        assert_eq!(one.associated_matrix(), blk.associated_matrix(n));

        let mu = c(0.3, -1.2);
        let nu = c(2.0, 0.5);
        let with = |w: C64| ElementaryBlock {
            weights: vec![w],
            ..blk.clone()
        };
        let two = weighted_direct_sum(n, 1, vec![with(mu), with(nu)]).unwrap();
        let scaled = blk
            .associated_matrix(n)
            .scale(mu.norm_sqr() + nu.norm_sqr());
        assert!(two.associated_matrix().max_abs_diff(&scaled).unwrap() < 1e-12);
    }

    #[test]
    fn weighted_direct_sum_rejects_mixed_shapes() {
        let n = 2;
        let pair = PairIndex::new(0, 1, n).unwrap();
        let blocks = vec![
            ElementaryBlock::unit(pair, root(0), 1),
            ElementaryBlock::unit(pair, root(0), 2),
        ];
        assert!(matches!(
            weighted_direct_sum(n, 1, blocks),
            Err(Error::Argument(_))
        ));
        let far = ElementaryBlock::unit(PairIndex::new(5, 6, 3).unwrap(), root(0), 1);
        assert!(weighted_direct_sum(2, 1, vec![far]).is_err());
    }

    #[test]
    fn materialize_single_and_double_blocks() {
        let n = 2;
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let pairs = PairIndex::all(n);
        let single = weighted_direct_sum(
            n,
            2,
            vec![ElementaryBlock {
                pair: pairs[6],
                eps: root(3),
                weights: vec![complex_normal(&mut rng), complex_normal(&mut rng)],
            }],
        )
        .unwrap();
        let t = materialize(&single, 100).unwrap();
        assert_eq!(t.dim(), 9);
        assert!(
            associated_matrix(&t)
                .max_abs_diff(&single.associated_matrix())
                .unwrap()
                < 1e-10
        );

        let double = weighted_direct_sum(
            n,
            1,
            vec![
                ElementaryBlock {
                    pair: pairs[2],
                    eps: root(1),
                    weights: vec![complex_normal(&mut rng)],
                },
                ElementaryBlock {
                    pair: pairs[7],
                    eps: root(2),
                    weights: vec![complex_normal(&mut rng)],
                },
            ],
        )
        .unwrap();
        let t = materialize(&double, 100).unwrap();
        assert_eq!(t.dim(), 36);
        assert!(t.unitaries().iter().all(|u| is_unitary(u, 1e-12)));
        assert!(
            associated_matrix(&t)
                .max_abs_diff(&double.associated_matrix())
                .unwrap()
                < 1e-10
        );

        assert!(matches!(
            materialize(&double, 10),
            Err(Error::Capacity {
                needed: 36,
                cap: 10
            })
        ));
    }

    #[test]
    fn materialized_unitaries_split_across_factors() {
        let n = 2;
        let pairs = PairIndex::all(n);
        let tt = weighted_direct_sum(
            n,
            1,
            vec![
                ElementaryBlock::unit(pairs[4], root(0), 1),
                ElementaryBlock::unit(pairs[9], root(1), 1),
            ],
        )
        .unwrap();
        let t = materialize(&tt, 1000).unwrap();
        let side = tt.side_dim();
        // U_1 = A ⊗ Id: entries vanish unless the right indices agree
        let u = t.unitary(1);
        for r in 0..t.dim() {
            for c in 0..t.dim() {
                if r % side != c % side {
                    assert_eq!(u[(r, c)], ZERO);
                }
            }
        }
        let v = t.unitary(n + 1);
        for r in 0..t.dim() {
            for c in 0..t.dim() {
                if r / side != c / side {
                    assert_eq!(v[(r, c)], ZERO);
                }
            }
        }
    }
}
