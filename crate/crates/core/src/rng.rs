//! Seed handling.
//!
//! Every random component owns a [`ChaCha8Rng`] seeded from a 64-bit value.
//! Sub-seeds (per stream, per model, per ensemble member) are derived from a
//! parent seed with the SplitMix64 finalizer so that adding a component never
//! perturbs the draws of its siblings.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of child `index` of `parent`.
///
/// `derive_seed(s, i)` is the `(i + 1)`-th SplitMix64 output of a generator
/// whose state starts at `s`.
pub fn derive_seed(parent: u64, index: u64) -> u64 {
    splitmix64(parent.wrapping_add(index.wrapping_mul(GOLDEN_GAMMA)))
}

pub fn seeded(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}
