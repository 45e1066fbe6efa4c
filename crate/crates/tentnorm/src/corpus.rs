//! Deterministic random corpora shared by unit tests, the acceptance
//! suite, and the experiment runners.  Everything flows from one seeded
//! generator so that identical configurations reproduce identical bytes.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::dyadic::{DyadicIndex, DyadicSequence};
use crate::geometry::{BallFamily, ConvexBody, KBall, NormKind};
use crate::haar::StepFunction;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sequence with Bernoulli(density) support on every level ≤ max_depth and
/// uniform values in [−1, 1].
pub fn random_sequence(rng: &mut ChaCha8Rng, max_depth: u32, density: f64) -> DyadicSequence {
    let mut seq = DyadicSequence::new();
    for level in 0..=max_depth {
        for position in 0..1u64 << level {
            if rng.gen_bool(density) {
                seq.set(DyadicIndex::raw(level, position), rng.gen_range(-1.0..1.0));
            }
        }
    }
    seq
}

/// Like [`random_sequence`] but with values on the grid `k/1024`, whose
/// sums and differences stay exact in floating point.
pub fn random_grid_sequence(rng: &mut ChaCha8Rng, max_depth: u32, density: f64) -> DyadicSequence {
    let mut seq = DyadicSequence::new();
    for level in 0..=max_depth {
        for position in 0..1u64 << level {
            if rng.gen_bool(density) {
                let v = rng.gen_range(-1024i64..=1024) as f64 / 1024.0;
                seq.set(DyadicIndex::raw(level, position), v);
            }
        }
    }
    seq
}

/// Step function of uniform depth in `0..=max_depth` and cell values in
/// [−1, 1].
pub fn random_step_function(rng: &mut ChaCha8Rng, max_depth: u32) -> StepFunction {
    let depth = rng.gen_range(0..=max_depth);
    StepFunction::new(depth, (0..1usize << depth).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .expect("generated length matches depth")
}

/// Family of 1..=max_balls random balls with centers in [−3, 3]^n and
/// radii in [0.1, 1.5].
pub fn random_family(
    rng: &mut ChaCha8Rng,
    dim: usize,
    norm: NormKind,
    max_balls: usize,
) -> BallFamily {
    let body = ConvexBody::new(dim, norm).expect("corpus dimensions are 1..=3");
    let count = rng.gen_range(1..=max_balls);
    let balls = (0..count)
        .map(|_| {
            let center = (0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect();
            KBall::new(center, rng.gen_range(0.1..1.5)).expect("positive radius")
        })
        .collect();
    BallFamily::new(body, balls, None).expect("dimensions agree by construction")
}

/// Uniform weights in [−2, 2].
pub fn random_weights(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-2.0..2.0)).collect()
}
