//! Seeded randomness. Every sampling entry point takes its generator
//! explicitly; nothing in the crate touches a global RNG.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic generator used throughout the crate. The ChaCha stream is
/// stable across platforms and crate versions.
pub type SimRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}
