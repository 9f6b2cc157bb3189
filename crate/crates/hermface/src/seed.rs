//! Per-trial random streams derived from one root seed.
//!
//! Every trial draws from its own ChaCha8 stream, keyed by the root seed, the
//! check name and the trial index, so the order in which trials run does not
//! matter.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SEED_ENV: &str = "HERMFACE_SEED";
pub const DEFAULT_SEED: u64 = 20_240_601;

/// 64-bit FNV-1a.
pub fn key_hash(key: &str) -> u64 {
    key.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

pub fn trial_rng(root: u64, key: &str, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(root ^ key_hash(key));
    rng.set_stream(trial);
    rng
}
