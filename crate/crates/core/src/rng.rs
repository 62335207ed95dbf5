//! Seed derivation for reproducible parallel replicates.
//!
//! Every random draw in the crate comes from a [`ChaCha8Rng`] seeded with a
//! 64-bit value. Independent streams (signal, projection, subset, ...) and
//! replicate indices are folded into the master seed with [`derive_seed`],
//! so replicate `r` sees the same numbers no matter which worker runs it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream tags used when deriving per-purpose seeds.
pub mod stream {
    pub const SIGNAL: u64 = 0x5349_474e;
    pub const SCHEME: u64 = 0x5343_484d;
    pub const SUBSET: u64 = 0x5355_4253;
    pub const LAG: u64 = 0x4c41_4753;
    pub const BLOCK: u64 = 0x424c_4f43;
}

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `seed = mix64(master ^ mix64(stream ^ mix64(index)))`.
///
/// The derivation is stable across releases; changing it changes every
/// emitted CSV.
#[inline]
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    mix64(master ^ mix64(stream ^ mix64(index)))
}

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn derived_rng(master: u64, stream: u64, index: u64) -> Rng {
    rng_from_seed(derive_seed(master, stream, index))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng as _;

    #[test]
    fn derivation_is_stable() {
        assert_eq!(derive_seed(1, 2, 3), derive_seed(1, 2, 3));
        assert_ne!(derive_seed(1, 2, 3), derive_seed(1, 2, 4));
        assert_ne!(derive_seed(1, 2, 3), derive_seed(1, 3, 3));
        assert_ne!(derive_seed(0, 0, 0), derive_seed(1, 0, 0));
    }

    #[test]
    fn derived_streams_reproduce() {
        let mut r1 = derived_rng(7, stream::SIGNAL, 9);
        let mut r2 = derived_rng(7, stream::SIGNAL, 9);
        let a: Vec<u64> = (0..4).map(|_| r1.random()).collect();
        let b: Vec<u64> = (0..4).map(|_| r2.random()).collect();
        assert_eq!(a, b);
    }
}
