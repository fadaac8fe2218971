//! Portable seeded randomness.
//!
//! All sampling in this crate goes through SplitMix64 (state initialised to
//! the seed, golden-gamma increment `0x9e3779b97f4a7c15`) and the two
//! derivations below, so that plans and synthetic fixtures can be reproduced
//! bit-for-bit by any other implementation:
//!
//! * uniform real in `[0, 1)`: `(next_u64 >> 11) * 2^-53`
//! * uniform integer in `[0, n)`: `(next_u64 as u128 * n) >> 64`
//!
//! Independent streams for named entities are derived with [`stream_seed`].

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

/// Seeded generator with the crate's fixed sampling derivations.
#[derive(Debug, Clone)]
pub struct SeededRng(SplitMix64);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng(SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform index in `[0, n)`. `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// In-place Fisher-Yates shuffle, walking from the back.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// SplitMix64 output finaliser.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for the stream belonging to `name` under `master`:
/// `mix64(master ^ fnv1a64(name))`.
pub fn stream_seed(master: u64, name: &str) -> u64 {
    mix64(master ^ fnv1a64(name.as_bytes()))
}
