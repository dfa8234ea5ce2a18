//! Seeded randomness.
//!
//! Every randomized routine takes a `u64` seed and draws from
//! [`ALGORITHM`] so results are bit-reproducible across platforms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Identifier of the PRNG behind [`rng_from_seed`], echoed in reports.
pub const ALGORITHM: &str = "chacha8";

pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the `index`-th independent trial derived from a base seed.
#[inline]
pub fn derive_seed(base: u64, index: u64) -> u64 {
    mix64(base ^ mix64(index.wrapping_add(0x5851_f42d_4c95_7f2d)))
}

/// Keyed 64-bit hash of an equality code.
#[inline]
pub fn keyed_hash(key: u64, code: u64) -> u64 {
    mix64(code ^ mix64(key))
}
