//! Reproducible random streams.
//!
//! Each replication draws from its own ChaCha8 stream. The key of a stream is
//! the master seed plus a path of indices (table size, replication number,
//! bootstrap draw, ...), so any work item can be regenerated in isolation and
//! results do not depend on the order in which a thread pool schedules them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a path of indices into a single 64-bit stream id.
pub fn stream_id(path: &[u64]) -> u64 {
    path.iter().fold(GOLDEN, |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

/// Generator for the stream addressed by `(master_seed, path)`.
pub fn stream(master_seed: u64, path: &[u64]) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream_id(path));
    rng
}

/// Generator for a plain seed (stream 0).
pub fn seeded(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives a child seed, used when a work item needs to hand a fresh master
/// seed to a nested computation (e.g. the bootstrap inside a replication).
pub fn child_seed(master_seed: u64, path: &[u64]) -> u64 {
    splitmix64(master_seed ^ stream_id(path))
}
