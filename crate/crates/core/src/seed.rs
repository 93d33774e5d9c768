//! Seeding for every random draw in the crate.
//!
//! A run is fully determined by one 64-bit master seed. Individual shots and
//! generator steps get their own substream seeds derived with SplitMix64, and
//! each substream drives a Xoshiro256++ generator. Nothing reads ambient
//! entropy.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer (Stafford variant 13).
pub fn mix64(mut x: u64) -> u64 {
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// First output of a SplitMix64 generator whose state is `x`.
pub fn splitmix64(x: u64) -> u64 {
    mix64(x.wrapping_add(GOLDEN_GAMMA))
}

/// Uniform draw in `[0, 1)` from the top 53 bits of a 64-bit word.
pub fn unit_f64(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct RandomSeed(pub u64);

impl RandomSeed {
    pub fn new(master: u64) -> Self {
        Self(master)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    /// Seed of the generator used for shot `shot_index`:
    /// `splitmix64(master XOR shot_index)`.
    pub fn shot_seed(self, shot_index: u64) -> u64 {
        splitmix64(self.0 ^ shot_index)
    }

    /// Independent child seed for a numbered sub-task (a walk step, a
    /// selection cycle, a retry). Child `k` is the `k+1`-th output of a
    /// SplitMix64 stream started at the master seed, so siblings never
    /// collide with each other or with the parent.
    pub fn stream(self, k: u64) -> RandomSeed {
        RandomSeed(mix64(
            self.0
                .wrapping_add(k.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)),
        ))
    }

    /// A Xoshiro256++ generator seeded from this seed.
    pub fn rng(self) -> Xoshiro256PlusPlus {
        Xoshiro256PlusPlus::seed_from_u64(self.0)
    }
}

impl From<u64> for RandomSeed {
    fn from(v: u64) -> Self {
        Self(v)
    }
}
