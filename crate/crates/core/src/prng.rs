//! Seeded SplitMix64 streams for experiments and synthetic inputs.
//!
//! A seed `s` gives the generator `SplitMix64::from_seed(s.to_le_bytes())`.
//! Trial `i` of an experiment seeded with `s` uses its own generator, seeded
//! with the first output of the generator for `s + (i + 1) * GAMMA`, so
//! trials can run in any order.

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::bitcore::BitString;

pub const PRNG_NAME: &str = "SplitMix64";

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix(seed: u64) -> SplitMix64 {
    SplitMix64::from_seed(seed.to_le_bytes())
}

pub fn trial_rng(seed: u64, trial: u64) -> SplitMix64 {
    let mixed = splitmix(seed.wrapping_add(trial.wrapping_add(1).wrapping_mul(GAMMA))).next_u64();
    splitmix(mixed)
}

/// A uniform double in [0, 1) from the top 53 bits.
pub fn unit(rng: &mut impl Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (-53f64).exp2()
}

pub fn bernoulli(rng: &mut impl Rng, p: f64) -> bool {
    unit(rng) < p
}

pub fn fair_bit(rng: &mut impl Rng) -> bool {
    rng.next_u64() >> 63 == 1
}

pub fn bernoulli_bits(p: f64, seed: u64, n: usize) -> BitString {
    let mut rng = splitmix(seed);
    (0..n).map(|_| bernoulli(&mut rng, p)).collect()
}

/// Uniform integer in `0..n` by rejection, so no value is favored.
pub fn below(rng: &mut impl Rng, n: u64) -> u64 {
    assert!(n > 0);
    let zone = u64::MAX - u64::MAX % n;
    loop {
        let v = rng.next_u64();
        if v < zone {
            return v % n;
        }
    }
}

/// Fisher–Yates shuffle.
pub fn shuffle<T>(rng: &mut impl Rng, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = below(rng, i as u64 + 1) as usize;
        items.swap(i, j);
    }
}
