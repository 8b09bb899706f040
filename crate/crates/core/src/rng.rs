//! Seeded randomness with a portable definition.
//!
//! A 64-bit seed is expanded by SplitMix64 into the 128-bit state and
//! stream of a PCG64 (XSL-RR 128/64) generator. Field elements are drawn by
//! rejection sampling on `next_u64`, so any implementation of the same two
//! generators reproduces the same draws.

use rand_core::Rng;
use rand_pcg::Pcg64;

/// Name recorded in assignment files.
pub const PRNG_NAME: &str = "pcg64-splitmix64";

#[derive(Debug, Clone)]
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn next_u128(&mut self) -> u128 {
        let hi = self.next_u64() as u128;
        (hi << 64) | self.next_u64() as u128
    }
}

/// Independent child seed number `index` of `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut sm = SplitMix64::new(seed ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    sm.next_u64();
    sm.next_u64()
}

#[derive(Debug, Clone)]
pub struct Prng(Pcg64);

impl Prng {
    pub fn from_seed(seed: u64) -> Self {
        let mut sm = SplitMix64::new(seed);
        let state = sm.next_u128();
        let stream = sm.next_u128();
        Prng(Pcg64::new(state, stream))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform draw from `0..bound`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let limit = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.next_u64();
            if x < limit {
                return x % bound;
            }
        }
    }

    /// Bernoulli trial with success probability `p`.
    pub fn chance(&mut self, p: f64) -> bool {
        ((self.next_u64() >> 11) as f64) * (1.0 / (1u64 << 53) as f64) < p
    }
}
