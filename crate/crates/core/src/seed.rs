//! Named random substreams derived from one user seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent consumers of randomness. Each gets its own ChaCha stream so
/// adding draws to one never shifts another.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    Weights = 1,
    BetweennessRoots = 2,
    Queries = 3,
    Delivery = 4,
    Jitter = 5,
}

pub fn rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// Seed for an integer API that wants a plain `u64` (e.g. weight assignment).
pub fn derive(seed: u64, stream: Stream) -> u64 {
    use rand::RngCore;
    rng(seed, stream).next_u64()
}
