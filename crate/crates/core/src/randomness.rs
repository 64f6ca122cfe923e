//! Selection rules, selection preimages, entropy bounds and dimension
//! estimates over finite prefixes.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::bitcore::{AlphaSize, BitString, Dyadic, IntervalCover};
use crate::complexity::{c_plain, kt_codelength, Budgets, KT_HEADER_BITS};
use crate::semimeasure::ProbBounds;
use crate::toyvm::{run, Coins, MachineMode, RunBudget};

/// Header constant added to the entropy bound.
pub const ENTROPY_BOUND_CONSTANT: f64 = 16.0;
/// Tail start for the running minimum of dimension rates.
pub const DEFAULT_TAIL_START: usize = 1024;
/// Exact bounded complexity is only used on prefixes shorter than this.
pub const EXACT_DIMENSION_LIMIT: usize = 32;

/// Decides from the bits seen so far whether the next bit is selected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum SelectionRule {
    EvenPositions,
    AfterZeros,
    /// Select when the prefix ends with `w` (always, for empty `w`).
    AfterPattern { w: BitString },
    /// A Plain-mode description run with the prefix as its condition; the
    /// first output bit decides. Runs that fail, exceed the step budget or
    /// print nothing count as "do not select".
    Program { code: BitString, step_budget: u64 },
}

impl SelectionRule {
    pub fn builtins() -> Vec<SelectionRule> {
        vec![
            SelectionRule::EvenPositions,
            SelectionRule::AfterZeros,
            SelectionRule::AfterPattern { w: BitString::new() },
            SelectionRule::AfterPattern { w: "1".parse().unwrap() },
            SelectionRule::AfterPattern { w: "01".parse().unwrap() },
        ]
    }

    pub fn decide(&self, prefix: &BitString) -> bool {
        self.decide_slice(prefix.as_slice())
    }

    fn decide_slice(&self, prefix: &[bool]) -> bool {
        let n = prefix.len();
        match self {
            SelectionRule::EvenPositions => n.is_multiple_of(2),
            SelectionRule::AfterZeros => prefix.last() == Some(&false),
            SelectionRule::AfterPattern { w } => prefix.ends_with(w.as_slice()),
            SelectionRule::Program { code, step_budget } => {
                let cond = BitString::from(prefix.to_vec());
                let out = run(code, MachineMode::Plain, &cond, Coins::None, RunBudget::new(*step_budget));
                out.output().and_then(|o| o.get(0)) == Some(true)
            }
        }
    }
}

/// The bits at positions whose proper prefix the rule selects.
pub fn select(rule: &SelectionRule, bits: &BitString) -> BitString {
    let all = bits.as_slice();
    (0..all.len())
        .filter(|&n| rule.decide_slice(&all[..n]))
        .map(|n| all[n])
        .collect()
}

/// Bounds on the measure of `A_x`, the sequences whose selected
/// subsequence starts with `x`, from every prefix of length `depth`.
///
/// A prefix counts in the lower bound once its selection starts with `x`.
/// A prefix still undecided at `depth`, having selected `s` so far (a
/// prefix of `x`), contributes `2^-(|x| - |s|)` of its mass to the upper
/// bound: whatever the rule does next, each further selected bit is a fair
/// coin.
pub fn preimage_measure(rule: &SelectionRule, x: &BitString, depth: usize) -> ProbBounds {
    assert!(depth >= x.len(), "depth must be at least |x|");
    let mut lower = Dyadic::zero();
    let mut undecided = Dyadic::zero();
    let mut stack = vec![(BitString::new(), BitString::new())];
    while let Some((w, s)) = stack.pop() {
        if s.len() == x.len() {
            lower += Dyadic::pow2_neg(w.len() as u32);
            continue;
        }
        if w.len() == depth {
            undecided += Dyadic::pow2_neg((w.len() + x.len() - s.len()) as u32);
            continue;
        }
        let chosen = rule.decide(&w);
        for b in [false, true] {
            let mut s2 = s.clone();
            if chosen {
                if x.get(s.len()) != Some(b) {
                    continue;
                }
                s2.push(b);
            }
            let mut w2 = w.clone();
            w2.push(b);
            stack.push((w2, s2));
        }
    }
    ProbBounds {
        upper: &lower + &undecided,
        lower,
        depth: depth as u64,
    }
}

pub fn shannon_entropy(p: f64) -> f64 {
    assert!((0.0..=1.0).contains(&p), "probability out of range: {p}");
    let h = |q: f64| if q == 0.0 { 0.0 } else { -q * q.log2() };
    h(p) + h(1.0 - p)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyBoundReport {
    pub n: usize,
    pub ones: usize,
    pub frequency: f64,
    /// `n H(k/n) + 2 log2 n`
    pub bound: f64,
    pub estimate: u64,
    pub constant: f64,
    /// `bound + constant - estimate`
    pub slack: f64,
    pub pass: bool,
}

/// Compares the KT codelength of `x` with `n H(k/n) + 2 log2 n`, where `k`
/// is the number of ones.
pub fn entropy_bound_report(x: &BitString) -> EntropyBoundReport {
    assert!(!x.is_empty(), "entropy bound needs a non-empty string");
    let n = x.len();
    let ones = x.count_ones();
    let frequency = ones as f64 / n as f64;
    let bound = n as f64 * shannon_entropy(frequency) + 2.0 * (n as f64).log2();
    let estimate = kt_codelength(x);
    let slack = bound + ENTROPY_BOUND_CONSTANT - estimate as f64;
    EntropyBoundReport {
        n,
        ones,
        frequency,
        bound,
        estimate,
        constant: ENTROPY_BOUND_CONSTANT,
        slack,
        pass: slack >= 0.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DimensionEstimator {
    Kt,
    ExactBounded { budgets: Budgets },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionEstimate {
    /// `(n, estimate(prefix n) / n)`
    pub per_n: Vec<(usize, f64)>,
    /// Minimum rate over lengths `n >= tail_start`, if any.
    pub running_min_tail: Option<f64>,
    pub tail_start: usize,
    pub estimator: DimensionEstimator,
    pub header_bits: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DimensionError {
    #[error("lengths must be strictly increasing")]
    NotIncreasing,
    #[error("exact bounded estimates are limited to prefixes shorter than {EXACT_DIMENSION_LIMIT} bits")]
    TooLongForExact,
    #[error("no description of the {0}-bit prefix within the budgets")]
    NotFound(usize),
}

/// Complexity rate of growing prefixes of a bit stream.
pub fn dimension_estimate(
    stream: &mut dyn FnMut() -> bool,
    lengths: &[usize],
    estimator: DimensionEstimator,
    tail_start: usize,
) -> Result<DimensionEstimate, DimensionError> {
    if lengths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(DimensionError::NotIncreasing);
    }
    let max = lengths.last().copied().unwrap_or(0);
    if matches!(estimator, DimensionEstimator::ExactBounded { .. }) && max >= EXACT_DIMENSION_LIMIT {
        return Err(DimensionError::TooLongForExact);
    }
    let mut prefix = BitString::with_capacity(max);
    let mut per_n = Vec::with_capacity(lengths.len());
    for &n in lengths {
        while prefix.len() < n {
            prefix.push(stream());
        }
        let est = match estimator {
            DimensionEstimator::Kt => kt_codelength(&prefix),
            DimensionEstimator::ExactBounded { budgets } => c_plain(&prefix, budgets, &BitString::new())
                .value
                .bits()
                .ok_or(DimensionError::NotFound(n))?,
        };
        per_n.push((n, est as f64 / n.max(1) as f64));
    }
    let running_min_tail = per_n
        .iter()
        .filter(|(n, _)| *n >= tail_start)
        .map(|&(_, r)| r)
        .reduce(f64::min);
    Ok(DimensionEstimate {
        per_n,
        running_min_tail,
        tail_start,
        estimator,
        header_bits: KT_HEADER_BITS,
    })
}

/// Whether the cover's alpha-size is strictly below `epsilon`; exact for
/// `alpha = 1`.
pub fn cover_check(cover: &IntervalCover, epsilon: &Dyadic, alpha: Ratio<u32>) -> bool {
    match cover.alpha_size(alpha) {
        AlphaSize::Exact(size) => size < *epsilon,
        AlphaSize::Approx(size) => size < epsilon.to_f64(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitcore::bits;
    use crate::prng::{bernoulli_bits, splitmix, fair_bit};
    use crate::toyvm::{assemble, Instr::*};
    use proptest::prelude::*;

    #[test]
    fn selection_examples() {
        assert_eq!(select(&SelectionRule::EvenPositions, &bits("00100100")), bits("0100"));
        assert_eq!(select(&SelectionRule::AfterZeros, &bits("00101100")), bits("0110"));
        for rule in SelectionRule::builtins() {
            assert_eq!(select(&rule, &bits("")), bits(""));
        }
        let all = SelectionRule::AfterPattern { w: bits("") };
        assert_eq!(select(&all, &bits("0110")), bits("0110"));
        let after_one = SelectionRule::AfterPattern { w: bits("1") };
        assert_eq!(select(&after_one, &bits("0110")), bits("10"));
    }

    #[test]
    fn program_rules() {
        // READC OUT END: select iff the first bit seen is 1.
        let first_is_one = SelectionRule::Program {
            code: assemble(&[ReadCond, Out, End]),
            step_budget: 8,
        };
        assert_eq!(select(&first_is_one, &bits("1010")), bits("010"));
        assert_eq!(select(&first_is_one, &bits("0101")), bits(""));
        // FLIP [ ] END loops forever: totalized as "do not select".
        let looping = SelectionRule::Program {
            code: assemble(&[Flip, Open, Close, End]),
            step_budget: 20,
        };
        assert_eq!(select(&looping, &bits("1111")), bits(""));
        let invalid = SelectionRule::Program { code: bits("01"), step_budget: 5 };
        assert_eq!(select(&invalid, &bits("11")), bits(""));
    }

    /// Every string of length `depth`, weighted: the mass whose selection
    /// starts with `x` bounds the lower end from below.
    fn brute_lower(rule: &SelectionRule, x: &BitString, depth: usize) -> Dyadic {
        let mut count = 0u64;
        for v in 0..1u64 << depth {
            let w: BitString = (0..depth).map(|i| v >> (depth - 1 - i) & 1 == 1).collect();
            if x.is_prefix_of(&select(rule, &w)) {
                count += 1;
            }
        }
        Dyadic::new(count, depth as u32)
    }

    #[test]
    fn preimage_examples() {
        let all = SelectionRule::AfterPattern { w: bits("") };
        let b = preimage_measure(&all, &bits("0"), 1);
        assert_eq!((b.lower, b.upper), (Dyadic::pow2_neg(1), Dyadic::pow2_neg(1)));
        let b = preimage_measure(&SelectionRule::AfterZeros, &bits(""), 5);
        assert_eq!((b.lower, b.upper), (Dyadic::one(), Dyadic::one()));
        let b = preimage_measure(&SelectionRule::AfterZeros, &bits("1"), 8);
        assert!(b.upper <= Dyadic::pow2_neg(1));
    }

    #[test]
    fn preimage_lower_matches_brute_force() {
        for rule in SelectionRule::builtins() {
            for x in ["0", "1", "01", "110"] {
                let x = bits(x);
                for depth in [4, 8] {
                    let b = preimage_measure(&rule, &x, depth);
                    assert_eq!(b.lower, brute_lower(&rule, &x, depth), "{rule:?} {x} {depth}");
                    assert!(b.lower <= b.upper);
                }
            }
        }
    }

    #[test]
    fn preimages_of_extensions_are_disjoint() {
        for rule in SelectionRule::builtins() {
            for x in ["", "0", "10"] {
                let x = bits(x);
                let whole = preimage_measure(&rule, &x, 10);
                let zero = preimage_measure(&rule, &x.concat(&bits("0")), 10);
                let one = preimage_measure(&rule, &x.concat(&bits("1")), 10);
                assert!(&zero.lower + &one.lower <= whole.upper);
            }
        }
    }

    #[test]
    fn entropy_values() {
        assert_eq!(shannon_entropy(0.5), 1.0);
        assert_eq!(shannon_entropy(0.0), 0.0);
        assert_eq!(shannon_entropy(1.0), 0.0);
        assert!((shannon_entropy(0.11) - 0.4999).abs() < 0.0005);
    }

    #[test]
    fn entropy_reports() {
        let r = entropy_bound_report(&BitString::ones(1000));
        assert!((r.bound - 2.0 * 1000f64.log2()).abs() < 1e-9);
        assert!(r.pass);
        let r = entropy_bound_report(&bits("01"));
        // bound 2 + 2, KT("01") = 3 + 8
        assert_eq!((r.bound, r.estimate, r.slack), (4.0, 11, 9.0));
        let x = bernoulli_bits(0.75, 1, 10_000);
        let r = entropy_bound_report(&x);
        assert!(r.pass);
        assert!((r.estimate as f64 / 1e4 - shannon_entropy(0.75)).abs() < 0.05);
    }

    #[test]
    fn dimension_examples() {
        let lengths: Vec<usize> = (10..=16).map(|k| 1usize << k).collect();
        let d = dimension_estimate(&mut || false, &lengths, DimensionEstimator::Kt, DEFAULT_TAIL_START).unwrap();
        assert!(d.running_min_tail.unwrap() <= 0.05);
        let mut rng = splitmix(9);
        let d = dimension_estimate(&mut || fair_bit(&mut rng), &lengths, DimensionEstimator::Kt, DEFAULT_TAIL_START).unwrap();
        let m = d.running_min_tail.unwrap();
        assert!((0.95..=1.05).contains(&m), "{m}");
        assert_eq!(
            dimension_estimate(&mut || false, &[4, 4], DimensionEstimator::Kt, 0),
            Err(DimensionError::NotIncreasing)
        );
        let exact = DimensionEstimator::ExactBounded { budgets: Budgets::new(12, 64) };
        assert_eq!(dimension_estimate(&mut || false, &[40], exact, 0), Err(DimensionError::TooLongForExact));
        let d = dimension_estimate(&mut || false, &[1], exact, 0).unwrap();
        assert_eq!(d.per_n, vec![(1, 7.0)]);
    }

    #[test]
    fn covers() {
        let one = Ratio::from_integer(1);
        let c = IntervalCover::new(vec![bits("0"), bits("1")]);
        assert!(!cover_check(&c, &Dyadic::one(), one));
        let c = IntervalCover::new(vec![bits("000")]);
        assert!(cover_check(&c, &Dyadic::pow2_neg(2), one));
        let c = IntervalCover::new(vec![bits("0000"), bits("0101"), bits("1010"), bits("1111")]);
        assert!(!cover_check(&c, &Dyadic::pow2_neg(1), Ratio::new(1, 2)));
    }

    proptest! {
        #[test]
        fn selection_is_prefix_monotone(u in prop::collection::vec(any::<bool>(), 0..40), v in prop::collection::vec(any::<bool>(), 0..20)) {
            let u = BitString::from(u);
            let uv = u.concat(&BitString::from(v));
            for rule in SelectionRule::builtins() {
                prop_assert!(select(&rule, &u).is_prefix_of(&select(&rule, &uv)));
            }
        }
    }
}
