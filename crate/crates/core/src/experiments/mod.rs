//! Incompressibility-method experiments on pseudo-random inputs, and the
//! one-tape and multihead machine simulators.
//!
//! Trial `i` of an experiment draws from `prng::trial_rng(seed, i)`, so a
//! report is reproduced exactly by its name, params and seed.

pub mod graph;
pub mod heapsort;
pub mod matrix;
pub mod multihead;
pub mod turing;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::HEAPSORT_CONSTANT;
use crate::prng::{fair_bit, shuffle, trial_rng, PRNG_NAME};

pub use graph::{ceil_log2, max_transitive, transitive_witness, Graph, Tournament};
pub use heapsort::{heapsort_instrumented, HeapsortRun};
pub use matrix::{gf2_rank, BitMatrix};
pub use multihead::{copy_recognizer, mirror_recognizer, simulate_multihead, HSym, MultiheadAutomaton};
pub use turing::{duplicator, OneTapeTM, Sym, TmError, TmRun};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub params: BTreeMap<String, Value>,
    pub seed: u64,
    pub prng: String,
    pub trials: u64,
    pub metrics: BTreeMap<String, f64>,
    pub pass: bool,
}

impl ExperimentReport {
    fn new(name: &str, params: Value, seed: u64, trials: u64) -> Self {
        let Value::Object(map) = params else {
            panic!("params must be an object")
        };
        ExperimentReport {
            name: name.to_string(),
            params: map.into_iter().collect(),
            seed,
            prng: PRNG_NAME.to_string(),
            trials,
            metrics: BTreeMap::new(),
            pass: false,
        }
    }

    fn metric(&mut self, key: impl Into<String>, v: impl Into<f64>) {
        self.metrics.insert(key.into(), v.into());
    }
}

/// Ranks over GF(2) of random n×n matrices; passes when every rank
/// exceeds n/2.
pub fn rank_experiment(n: usize, trials: u64, seed: u64) -> ExperimentReport {
    assert!(n >= 2);
    let ranks: Vec<usize> = (0..trials)
        .map(|t| gf2_rank(&BitMatrix::random(n, &mut trial_rng(seed, t))))
        .collect();
    let mut r = ExperimentReport::new("rank", json!({ "n": n }), seed, trials);
    let min = ranks.iter().copied().min().unwrap_or(n);
    r.metric("min_rank", min as f64);
    r.metric("max_rank", ranks.iter().copied().max().unwrap_or(n) as f64);
    r.metric("mean_rank", mean(ranks.iter().map(|&x| x as f64)));
    r.pass = 2 * min > n;
    r
}

/// Random graphs from n(n-1)/2 fair bits; passes when all are connected.
pub fn connectivity_experiment(n: usize, trials: u64, seed: u64) -> ExperimentReport {
    assert!(n >= 2);
    let connected = (0..trials)
        .filter(|&t| Graph::random(n, &mut trial_rng(seed, t)).is_connected())
        .count() as u64;
    let mut r = ExperimentReport::new("graph", json!({ "n": n }), seed, trials);
    r.metric("connected", connected as f64);
    r.metric("disconnected", (trials - connected) as f64);
    r.pass = connected == trials;
    r
}

/// Band for the largest transitive sub-tournament of a random tournament:
/// [ceil(log2(n+1)), 2 ceil(log2 n) + 2]. The upper edge is configured.
pub fn tournament_band(n: usize) -> (usize, usize) {
    (ceil_log2(n + 1), 2 * ceil_log2(n) + 2)
}

/// Exact maximum transitive sub-tournament of random tournaments (n <= 16)
/// and the inductive witness for each.
pub fn tournament_experiment(n: usize, trials: u64, seed: u64) -> ExperimentReport {
    assert!((1..=16).contains(&n), "exact search needs n <= 16");
    let (lo, hi) = tournament_band(n);
    let mut r = ExperimentReport::new("tournament", json!({ "n": n, "band_low": lo, "band_high": hi }), seed, trials);
    let (mut min_max, mut max_max, mut min_witness) = (usize::MAX, 0, usize::MAX);
    let mut witnesses_valid = true;
    for t in 0..trials {
        let tour = Tournament::random(n, &mut trial_rng(seed, t));
        let m = max_transitive(&tour);
        let w = transitive_witness(&tour);
        witnesses_valid &= tour.is_transitive_chain(&w) && w.len() <= m;
        min_max = min_max.min(m);
        max_max = max_max.max(m);
        min_witness = min_witness.min(w.len());
    }
    if trials > 0 {
        r.metric("min_max_transitive", min_max as f64);
        r.metric("max_max_transitive", max_max as f64);
        r.metric("min_witness", min_witness as f64);
    }
    r.pass = witnesses_valid && (trials == 0 || (lo <= min_max && max_max <= hi && min_witness >= lo));
    r
}

/// Heapsort on random permutations of 1..=N; passes when every run sorts
/// and keeps sum_d / N within the configured constant.
pub fn heapsort_experiment(n: usize, trials: u64, seed: u64) -> ExperimentReport {
    let mut r = ExperimentReport::new(
        "heapsort",
        json!({ "n": n, "heapsort_constant": HEAPSORT_CONSTANT }),
        seed,
        trials,
    );
    let mut ratios = Vec::new();
    let mut sorted_ok = true;
    let mut phase1 = 0u64;
    for t in 0..trials {
        let mut p: Vec<u32> = (1..=n as u32).collect();
        shuffle(&mut trial_rng(seed, t), &mut p);
        let run = heapsort_instrumented(&p);
        p.sort_unstable();
        sorted_ok &= run.sorted == p;
        ratios.push(run.sum_d as f64 / n.max(1) as f64);
        phase1 = phase1.max(run.phase1_comparisons);
    }
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    r.metric("max_sum_d_over_n", max_ratio);
    r.metric("mean_sum_d_over_n", mean(ratios.iter().copied()));
    r.metric("max_phase1_comparisons", phase1 as f64);
    r.metric("all_sorted", u8::from(sorted_ok));
    r.pass = sorted_ok && max_ratio <= HEAPSORT_CONSTANT;
    r
}

/// Step cap for duplicating an input of length `m`.
fn duplication_cap(m: usize) -> u64 {
    let m = m as u64;
    4 * m * m + 16 * m + 64
}

/// Runs the duplicator on `0^n x` for random `x` of length `n`, for each n.
/// Passes when every output is the input twice, the crossing counts sum to
/// at most the step count, and t(2n)/t(n) lies in [3, 5] wherever both n
/// and 2n are present.
pub fn tm_duplication_experiment(n_values: &[usize], seed: u64) -> ExperimentReport {
    let tm = duplicator();
    let mut r = ExperimentReport::new("tm-dup", json!({ "n_values": n_values }), seed, n_values.len() as u64);
    let mut pass = true;
    let mut steps = BTreeMap::new();
    for (i, &n) in n_values.iter().enumerate() {
        let mut rng = trial_rng(seed, i as u64);
        let mut input = vec![Sym::Zero; n];
        input.extend((0..n).map(|_| Sym::bit(fair_bit(&mut rng))));
        match tm.run(&input, duplication_cap(input.len())) {
            Ok(run) => {
                let doubled = [input.as_slice(), input.as_slice()].concat();
                let crossing_sum: u64 = run.crossings.iter().sum();
                // Boundaries between cells 2n and 3n, which the copy of x has
                // to cross on its way into the initially blank area.
                let band = &run.crossings[2 * n..=3 * n];
                pass &= run.output == doubled && crossing_sum <= run.steps;
                r.metric(format!("steps_{n}"), run.steps as f64);
                r.metric(format!("crossing_sum_{n}"), crossing_sum as f64);
                r.metric(format!("min_crossings_2n_3n_{n}"), band.iter().copied().min().unwrap_or(0) as f64);
                r.metric(format!("correct_{n}"), u8::from(run.output == doubled));
                steps.insert(n, run.steps);
            }
            Err(e) => {
                pass = false;
                r.metric(format!("step_cap_exceeded_{n}"), 1.0);
                r.params.insert(format!("error_{n}"), json!(e.to_string()));
            }
        }
    }
    for (&n, &t) in &steps {
        if let Some(&t2) = steps.get(&(2 * n)) {
            let ratio = t2 as f64 / t as f64;
            r.metric(format!("ratio_{}_{}", 2 * n, n), ratio);
            pass &= (3.0..=5.0).contains(&ratio);
        }
    }
    r.pass = pass;
    r
}

/// Runs both built-in recognizers on `cases` generated inputs each, half of
/// them well-formed members and half single-character perturbations, and
/// compares with direct pattern checks.
pub fn multihead_experiment(cases: u64, block_len: usize, seed: u64) -> ExperimentReport {
    use multihead::{copy_pattern, mirror_pattern, perturb, random_bits};
    let (two, three) = (copy_recognizer(), mirror_recognizer());
    let mut r = ExperimentReport::new("multihead", json!({ "block_len": block_len }), seed, cases);
    let (mut agree2, mut agree3, mut accepted2, mut accepted3) = (0u64, 0u64, 0u64, 0u64);
    for t in 0..cases {
        let mut rng = trial_rng(seed, t);
        let (x, y, z) = (
            random_bits(&mut rng, block_len),
            random_bits(&mut rng, block_len),
            random_bits(&mut rng, block_len),
        );
        let mut s2 = format!("{x}#{x}");
        let mut s3 = format!("{x}#{y}#{z}#{z}#{y}#{x}");
        if t % 2 == 1 {
            s2 = perturb(&mut rng, &s2);
            s3 = perturb(&mut rng, &s3);
        }
        let (a2, a3) = (simulate_multihead(&two, &s2), simulate_multihead(&three, &s3));
        agree2 += u64::from(a2 == copy_pattern(&s2));
        agree3 += u64::from(a3 == mirror_pattern(&s3));
        accepted2 += u64::from(a2);
        accepted3 += u64::from(a3);
    }
    r.metric("agree_two_head", agree2 as f64);
    r.metric("agree_three_head", agree3 as f64);
    r.metric("accepted_two_head", accepted2 as f64);
    r.metric("accepted_three_head", accepted3 as f64);
    r.pass = agree2 == cases && agree3 == cases;
    r
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (s, c) = xs.fold((0.0, 0u64), |(s, c), x| (s + x, c + 1));
    if c == 0 { 0.0 } else { s / c as f64 }
}
