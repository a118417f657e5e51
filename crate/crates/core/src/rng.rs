//! Seeded random streams.
//!
//! Every random decision in the crate draws from a ChaCha8 generator keyed
//! by `(seed, stream, index)`. Distinct [`Stream`]s never share key material,
//! so splitting, simulation, tie-breaking and fold assignment stay
//! independently reproducible, and per-sample draws do not depend on the
//! order in which samples are processed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stream {
    Split = 1,
    Simulate = 2,
    Tiebreak = 3,
    Fold = 4,
    Synthetic = 5,
}

/// Generator for `(seed, stream)`; `index` selects an independent sub-stream.
pub fn substream(seed: u64, stream: Stream, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, stream as u64));
    rng.set_stream(index);
    rng
}

// splitmix64 finalizer over the pair
fn mix(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
