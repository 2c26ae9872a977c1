//! Seeded, platform-independent randomness.
//!
//! Everything random in the crate draws from SplitMix64 so that a seed
//! reproduces the same output on every platform.

use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

pub type Rng = SplitMix64;

pub fn rng(seed: u64) -> Rng {
    SplitMix64::seed_from_u64(seed)
}

/// The `index`-th child seed of `master`, used for restarts.
pub fn split_seed(master: u64, index: usize) -> u64 {
    let mut r = rng(master);
    let mut s = 0;
    for _ in 0..=index {
        s = r.next_u64();
    }
    s
}

/// Fisher–Yates shuffle driven by `seed`.
pub fn shuffle<T>(items: &mut [T], seed: u64) {
    items.shuffle(&mut rng(seed));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let mut a: Vec<u32> = (0..50).collect();
        let mut b = a.clone();
        shuffle(&mut a, 7);
        shuffle(&mut b, 7);
        assert_eq!(a, b);
        assert_ne!(a, (0..50).collect::<Vec<_>>());
        assert_ne!(split_seed(1, 0), split_seed(1, 1));
        assert_eq!(split_seed(9, 3), split_seed(9, 3));
    }
}
