//! Seeded randomness.
//!
//! All randomness comes from ChaCha8, a counter-based generator. One user
//! seed fans out into independent named streams (ChaCha's 64-bit stream id),
//! so drawing more data never perturbs the initialization and vice versa.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent purposes a single seed is split into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Data = 1,
    Init = 2,
    Batches = 3,
    Probes = 4,
    Test = 5,
    Truth = 6,
    Misc = 7,
}

pub fn stream(seed: u64, which: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(which as u64);
    rng
}
