//! Seed plumbing.
//!
//! Every randomized operation in this crate takes an explicit 64-bit seed and
//! expands it with ChaCha8 (via `rand_chacha`). Independent sub-streams are
//! derived with SplitMix64 so that, e.g., each experiment trial gets its own
//! reproducible generator regardless of scheduling order.

use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

/// The pseudo-random generator used throughout: ChaCha8 keyed from a 64-bit
/// seed. `seed_from_u64` is stable across platforms and `rand` releases.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent child seed from a master seed and a lane id
/// (SplitMix64 finalizer).
pub fn derive_seed(master: u64, lane: u64) -> u64 {
    let mut z = master ^ lane.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn derive_is_deterministic_and_lane_sensitive() {
        assert_eq!(derive_seed(42, 0), derive_seed(42, 0));
        assert_ne!(derive_seed(42, 0), derive_seed(42, 1));
        assert_ne!(derive_seed(42, 0), derive_seed(43, 0));
    }

    #[test]
    fn rng_replays() {
        let a: Vec<u64> = (0..8).map(|_| 0u64).collect();
        let mut r1 = rng_from_seed(7);
        let mut r2 = rng_from_seed(7);
        let s1: Vec<u64> = a.iter().map(|_| r1.random()).collect();
        let s2: Vec<u64> = a.iter().map(|_| r2.random()).collect();
        assert_eq!(s1, s2);
    }
}
