//! Configured constants that the theory only fixes up to O(1), plus default
//! budgets and seeds. Reports embed a `Config` so they describe themselves.

use serde::{Deserialize, Serialize};

use crate::complexity::{Budgets, KT_HEADER_BITS};
use crate::prng::PRNG_NAME;
use crate::randomness::{DEFAULT_TAIL_START, ENTROPY_BOUND_CONSTANT};
use crate::toyvm::MACHINE_VERSION;

/// Slack allowed in C(x,y) <= C(x) + 2 log C(x) + C(y) + c.
pub const PAIR_CONSTANT: i64 = 40;
/// Bound on the heapsort level sum divided by N.
pub const HEAPSORT_CONSTANT: f64 = 6.0;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_MAX_LEN: usize = 20;
pub const DEFAULT_MAX_STEPS: u64 = 256;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub machine_version: String,
    pub prng: String,
    pub default_budgets: Budgets,
    pub default_seed: u64,
    pub pair_constant: i64,
    pub heapsort_constant: f64,
    pub kt_header_bits: u64,
    pub entropy_bound_constant: f64,
    pub tail_start: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            machine_version: MACHINE_VERSION.to_string(),
            prng: PRNG_NAME.to_string(),
            default_budgets: Budgets::new(DEFAULT_MAX_LEN, DEFAULT_MAX_STEPS),
            default_seed: DEFAULT_SEED,
            pair_constant: PAIR_CONSTANT,
            heapsort_constant: HEAPSORT_CONSTANT,
            kt_header_bits: KT_HEADER_BITS,
            entropy_bound_constant: ENTROPY_BOUND_CONSTANT,
            tail_start: DEFAULT_TAIL_START,
        }
    }
}
