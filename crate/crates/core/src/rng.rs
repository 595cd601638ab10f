//! Seeded pseudo-random generation.
//!
//! All randomness (dataset splits, network initialisation, example selection
//! during training) goes through [`SeededRng`], which is xoshiro256++
//! (Blackman & Vigna, 2019) seeded from a `u64` by expanding it with
//! SplitMix64 (increment `0x9e3779b97f4a7c15`, multipliers
//! `0xbf58476d1ce4e5b9` and `0x94d049bb133111eb`). Both algorithms are
//! fixed, so a seed reproduces the same stream on every platform.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

#[derive(Debug, Clone)]
pub struct SeededRng(Xoshiro256PlusPlus);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform index in `0..bound` by the multiply-shift reduction
    /// `(x * bound) >> 64`. `bound` must be nonzero.
    pub fn below(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        ((self.next_u64() as u128 * bound as u128) >> 64) as usize
    }

    /// Uniform double in `[0, 1)` from the top 53 bits.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform double in `[-r, r)`.
    pub fn symmetric(&mut self, r: f64) -> f64 {
        (2.0 * self.unit() - 1.0) * r
    }
}
