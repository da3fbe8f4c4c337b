//! Random number streams.
//!
//! Every stochastic component draws from [`Rng`], a ChaCha20 stream from
//! `rand_chacha`. ChaCha output is specified independently of platform and word
//! size, so a seed reproduces the same run everywhere.

use rand::SeedableRng;

pub type Rng = rand_chacha::ChaCha20Rng;

/// Name of the generator, recorded in run metadata.
pub const RNG_ALGORITHM: &str = "ChaCha20 (rand_chacha 0.9, seed_from_u64)";

pub fn seeded(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from a base seed and a path of coordinates.
///
/// Each coordinate is folded in with a SplitMix64 round, so distinct
/// coordinate paths give statistically independent seeds and a seed depends on
/// nothing but its own path.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(mix64(base), |acc, &c| mix64(acc ^ mix64(c.wrapping_add(0x632b_e59b_d9b4_e019))))
}
