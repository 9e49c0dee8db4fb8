//! Seeded, portable random number generation.
//!
//! All stochastic operations take a [`SimRng`], which is ChaCha20 seeded from
//! a `u64`. The algorithm produces the same stream on every platform, so a
//! seed fully determines a run. Parallel work derives independent streams
//! with [`stream_rng`].

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// The generator threaded through every stochastic operation.
pub type SimRng = ChaCha20Rng;

/// Generator for a master seed.
pub fn seeded(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

/// Generator for sub-stream `stream` of a master seed.
pub fn stream_rng(seed: u64, stream: u64) -> SimRng {
    let mut rng = SimRng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
