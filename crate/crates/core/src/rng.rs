//! Seeding and stream derivation.
//!
//! Every random draw in the crate goes through [`GenRng`] (ChaCha8). A run is
//! identified by a 64-bit seed; batch campaigns derive one seed per
//! (combination, run) pair with [`derive_seed`] so a single run can be
//! replayed in isolation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type GenRng = ChaCha8Rng;

/// Salt mixed into a seed to obtain the link-graph stream of a run.
pub const LINK_STREAM: u64 = 0x6c69_6e6b_5f67_656e;

pub fn rng_from_seed(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The splitmix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of run `run` in parameter combination `combination`:
/// `splitmix64(splitmix64(base ^ combination) ^ run)`.
pub fn derive_seed(base: u64, combination: u64, run: u64) -> u64 {
    splitmix64(splitmix64(base ^ combination) ^ run)
}

/// Seed used for the link graph of a run whose place graph used `seed`.
pub fn link_seed(seed: u64) -> u64 {
    splitmix64(seed ^ LINK_STREAM)
}
