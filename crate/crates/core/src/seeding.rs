//! Stable derivation of independent RNG streams.
//!
//! Every random draw in a run comes from a `ChaCha8Rng` seeded by
//! [`stream_seed`], which mixes the master seed with a graph id and integer
//! coordinates (level, restart index, ...). The mix is a fixed FNV-1a +
//! SplitMix64 construction so seeds are identical across platforms, Rust
//! versions and thread schedules.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(FNV_OFFSET, |h, &b| (h ^ b as u64).wrapping_mul(FNV_PRIME))
}

/// Seed for the stream identified by `(master, label, coords...)`.
pub fn stream_seed(master: u64, label: &str, coords: &[u64]) -> u64 {
    let mut h = splitmix64(master ^ fnv1a(label.as_bytes()));
    for &c in coords {
        h = splitmix64(h ^ splitmix64(c));
    }
    h
}

pub fn stream_rng(master: u64, label: &str, coords: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(master, label, coords))
}
