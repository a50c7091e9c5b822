//! Seeded, splittable randomness. Every randomized decision in the crate
//! draws from a ChaCha8 stream derived from a 64-bit seed, so a seed fully
//! determines query counts.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SolverRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SolverRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent child stream `index` of `seed`.
pub fn split(seed: u64, index: u64) -> SolverRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
