//! The seeded generator used everywhere randomness enters.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Portable counter-based generator.
pub type ExperimentRng = ChaCha8Rng;

/// Identifier written into experiment outputs.
pub const RNG_ALGORITHM: &str = "chacha8-seed_from_u64";

pub fn rng_from_seed(seed: u64) -> ExperimentRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One SplitMix64 step from state `seed` advanced `stream + 1` times; derives
/// independent per-run seeds.
pub fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
