//! Seeded fixtures shared by the benchmarks in `benches/`.

use polarnorm::construct::{decompose, weighted_direct_sum};
use polarnorm::model::random_triplet;
use polarnorm::{SpanElement, TensorTriplet, Triplet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn triplet(n: usize, k: usize, dim: usize, seed: u64) -> Triplet {
    random_triplet(n, k, dim, &mut ChaCha8Rng::seed_from_u64(seed)).expect("valid shape")
}

pub fn span(n: usize, k: usize, seed: u64) -> SpanElement {
    SpanElement::random(n, k, 1.0, &mut ChaCha8Rng::seed_from_u64(seed)).expect("valid shape")
}

/// The first `blocks` blocks of a decomposition, as a standalone direct sum.
pub fn truncated_sum(n: usize, blocks: usize, seed: u64) -> TensorTriplet {
    let t = triplet(n, 1, 2, seed);
    let full = decompose(&t);
    let kept = full.blocks()[..blocks.min(full.blocks().len())].to_vec();
    weighted_direct_sum(n, 1, kept).expect("blocks share n and k")
}
