//! Deterministic seeding.
//!
//! Every random quantity in a sweep is a pure function of the base seed:
//! network seeds mix a stable hash of the network-defining parameters with
//! the network index, replica seeds XOR the replica index into the network
//! seed, and each run splits its seed into independent ChaCha streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Stream used for network construction.
pub const STREAM_NETWORK: u64 = 0;
/// Stream used for seeding and Gillespie event sampling.
pub const STREAM_EPIDEMIC: u64 = 1;
/// Stream used by the daily intervention step.
pub const STREAM_INTERVENTION: u64 = 2;

/// SplitMix64 finalizer.
pub fn mix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// FNV-1a over the bytes, finished with [`mix64`]. Stable across platforms
/// and toolchains, unlike `std`'s hasher.
pub fn stable_hash(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    mix64(h)
}

pub fn network_seed(base_seed: u64, cell_hash: u64, network_index: u64) -> u64 {
    base_seed ^ mix64(cell_hash ^ mix64(network_index))
}

pub fn replica_seed(network_seed: u64, replica_index: u64) -> u64 {
    network_seed ^ replica_index
}

/// An independent ChaCha stream for `(seed, stream)`.
pub fn stream(seed: u64, stream: u64) -> SimRng {
    let mut rng = SimRng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
