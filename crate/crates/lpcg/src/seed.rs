//! Deterministic seed derivation.
//!
//! Every stochastic stage draws from its own ChaCha stream derived from a
//! master seed plus a list of integer labels (record index, group id,
//! component id, ...). Streams are independent of each other and of
//! evaluation order, so results never depend on how work is scheduled.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer; good avalanche for combining small integers.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Collapse a master seed and a label path into one stream seed.
pub fn stream_seed(master: u64, parts: &[u64]) -> u64 {
    let mut state = mix(master);
    for &p in parts {
        state = mix(state ^ mix(p));
    }
    state
}

/// An independent RNG for the stream identified by `parts` under `master`.
pub fn stream_rng(master: u64, parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(master, parts))
}

/// Stable 64-bit hash of a string label (FNV-1a), for keying streams by
/// frame id rather than by position.
pub fn label_hash(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
