//! Seed derivation.
//!
//! Every random stream in the crate is keyed by a base seed, a stream label
//! and a list of cell indices, so that any single cell of an experiment can
//! be rerun in isolation and reproduce its numbers exactly.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The RNG used everywhere a reproducible stream is needed.
pub type Rng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a child seed from `base`, a stream label and cell indices.
///
/// The label is folded in byte by byte (FNV-1a), then every index is mixed
/// through SplitMix64. The mapping is fixed and platform independent.
pub fn derive(base: u64, label: &str, indices: &[u64]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    let mut s = splitmix64(base ^ splitmix64(h));
    for &i in indices {
        s = splitmix64(s ^ splitmix64(i.wrapping_add(0x5851_F42D_4C95_7F2D)));
    }
    s
}

/// Construct the RNG for a derived stream.
pub fn rng(base: u64, label: &str, indices: &[u64]) -> Rng {
    Rng::seed_from_u64(derive(base, label, indices))
}
