//! Probabilistic machines and lower bounds on a priori probability.
//!
//! Coin-mode descriptions are analyzed by exploring their coin tree: a
//! branch point is created only where the machine reads a coin. All masses
//! are exact dyadic rationals. Divergence is never proven, so branches that
//! run out of steps count as possibly halting in the upper bound.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::bitcore::{BitString, Dyadic};
use crate::complexity::Budgets;
use crate::toyvm::machine::{ConfigKey, Event, Machine, Source, Stream};
use crate::toyvm::{
    code_segment_len, walk, HaltEvent, InvalidReason, MachineMode, Visitor, MACHINE_VERSION,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SemimeasureError {
    #[error("invalid coin-mode description: {0:?}")]
    Invalid(InvalidReason),
    #[error("sequence term {index} is {reason}")]
    BadTerm { index: usize, reason: &'static str },
    #[error("empty term list")]
    NoTerms,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbBounds {
    pub lower: Dyadic,
    pub upper: Dyadic,
    pub depth: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemimeasureTable {
    pub entries: BTreeMap<BitString, Dyadic>,
    /// Mass of coin branches still running when the step budget ran out.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub undecided: Option<Dyadic>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budgets: Option<Budgets>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<u64>,
    pub machine_version: String,
}

impl SemimeasureTable {
    pub fn total(&self) -> Dyadic {
        self.entries.values().sum()
    }
}

/// Outcomes of a coin subtree, relative to its root: halting mass per
/// output suffix, and the mass that exceeded the budget.
#[derive(Clone, Debug, Default)]
struct Subtree {
    halted: BTreeMap<BitString, Dyadic>,
    undecided: Dyadic,
}

impl Subtree {
    fn halted_mass(&self) -> Dyadic {
        self.halted.values().sum()
    }
}

struct CoinTree {
    max_steps: u64,
    memo: HashMap<(ConfigKey, u64), Rc<Subtree>>,
}

impl CoinTree {
    fn explore(&mut self, mut m: Machine) -> Subtree {
        let base = m.output.len();
        let suffix = |m: &Machine| m.output.slice(base, m.output.len());
        loop {
            match m.step(self.max_steps) {
                Event::Continue => {}
                Event::Need(Source::Data) => {
                    let below = self.branch(&m);
                    let prefix = suffix(&m);
                    return Subtree {
                        halted: below
                            .halted
                            .iter()
                            .map(|(s, p)| (prefix.concat(s), p.clone()))
                            .collect(),
                        undecided: below.undecided.clone(),
                    };
                }
                Event::Halt(_) => {
                    return Subtree {
                        halted: BTreeMap::from([(suffix(&m), Dyadic::one())]),
                        undecided: Dyadic::zero(),
                    };
                }
                Event::OutOfBudget => {
                    return Subtree {
                        halted: BTreeMap::new(),
                        undecided: Dyadic::one(),
                    };
                }
                // The code was validated up front and coins never run out.
                e => unreachable!("coin tree: {e:?}"),
            }
        }
    }

    /// Both coin values at a read, memoized on the machine configuration and
    /// the steps already spent.
    fn branch(&mut self, m: &Machine) -> Rc<Subtree> {
        let key = (m.config_key(false), m.steps);
        if let Some(hit) = self.memo.get(&key) {
            return Rc::clone(hit);
        }
        let mut merged = Subtree::default();
        for coin in [false, true] {
            let mut child = m.clone();
            child.supply(Source::Data, coin);
            let sub = self.explore(child);
            for (s, p) in sub.halted {
                *merged.halted.entry(s).or_default() += p.div_pow2(1);
            }
            merged.undecided += sub.undecided.div_pow2(1);
        }
        let merged = Rc::new(merged);
        self.memo.insert(key, Rc::clone(&merged));
        merged
    }
}

fn coin_tree(code: &BitString, depth: u64) -> Result<Subtree, SemimeasureError> {
    let len = code_segment_len(code).map_err(SemimeasureError::Invalid)?;
    if len != code.len() {
        return Err(SemimeasureError::Invalid(InvalidReason::TrailingBits));
    }
    let m = Machine::new(
        MachineMode::Coin,
        Stream::closed(code.clone()),
        Stream::open(),
        Arc::new(BitString::new()),
    );
    let mut t = CoinTree {
        max_steps: depth,
        memo: HashMap::new(),
    };
    Ok(t.explore(m))
}

/// Bounds on the probability that a coin-mode description halts, from its
/// coin tree cut at `depth` steps.
pub fn halting_bounds(code: &BitString, depth: u64) -> Result<ProbBounds, SemimeasureError> {
    let t = coin_tree(code, depth)?;
    let lower = t.halted_mass();
    let upper = &lower + &t.undecided;
    Ok(ProbBounds {
        lower,
        upper,
        depth,
    })
}

/// Exact probability of each output among coin branches halting within
/// `depth` steps: a lower bound on the output distribution.
pub fn output_distribution(code: &BitString, depth: u64) -> Result<SemimeasureTable, SemimeasureError> {
    let t = coin_tree(code, depth)?;
    Ok(SemimeasureTable {
        entries: t.halted,
        undecided: Some(t.undecided),
        budgets: None,
        depth: Some(depth),
        machine_version: MACHINE_VERSION.to_string(),
    })
}

type TermFn = dyn Fn(usize) -> Option<BigRational> + Send + Sync;

/// A non-decreasing sequence of rationals in [0, 1], consumed lazily. A
/// term of `None` means the generator has not produced it (yet).
pub struct LscSequence {
    terms: Box<TermFn>,
    limit: Option<BigRational>,
}

fn check_unit(q: &BigRational, index: usize) -> Result<(), SemimeasureError> {
    if q.is_negative() || *q > BigRational::one() {
        return Err(SemimeasureError::BadTerm {
            index,
            reason: "outside [0, 1]",
        });
    }
    Ok(())
}

impl LscSequence {
    /// Finitely many terms, the last repeated forever; the limit is the
    /// last term.
    pub fn from_terms(terms: Vec<BigRational>) -> Result<Self, SemimeasureError> {
        let last = terms.last().cloned().ok_or(SemimeasureError::NoTerms)?;
        for (i, q) in terms.iter().enumerate() {
            check_unit(q, i)?;
            if i > 0 && *q < terms[i - 1] {
                return Err(SemimeasureError::BadTerm {
                    index: i,
                    reason: "smaller than its predecessor",
                });
            }
        }
        let n = terms.len();
        Ok(LscSequence {
            terms: Box::new(move |i| Some(terms[i.min(n - 1)].clone())),
            limit: Some(last),
        })
    }

    pub fn constant(p: BigRational) -> Result<Self, SemimeasureError> {
        Self::from_terms(vec![p])
    }

    /// Terms from a generator. `limit` may be given when it is known; it is
    /// only used for the upper bound.
    pub fn from_fn(
        f: impl Fn(usize) -> Option<BigRational> + Send + Sync + 'static,
        limit: Option<BigRational>,
    ) -> Self {
        LscSequence {
            terms: Box::new(f),
            limit,
        }
    }

    pub fn term(&self, i: usize) -> Option<BigRational> {
        (self.terms)(i)
    }

    pub fn limit(&self) -> Option<&BigRational> {
        self.limit.as_ref()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum LscRun {
    Halts { index: usize },
    Undecided,
}

/// The machine that halts with probability `p`: the coins are binary digits
/// of `beta`, and it halts once the cylinder of the coins read so far lies
/// strictly below the current term.
pub fn lsc_machine_run(p: &LscSequence, coins: &mut dyn FnMut() -> bool, max_index: usize) -> LscRun {
    let mut beta = BigInt::zero();
    for i in 0..=max_index {
        if i > 0 {
            beta = beta * 2 + BigInt::from(u8::from(coins()));
        }
        let Some(q) = p.term(i) else {
            return LscRun::Undecided;
        };
        let upper = BigRational::new(&beta + 1, BigInt::one() << i);
        if upper < q {
            return LscRun::Halts { index: i };
        }
    }
    LscRun::Undecided
}

/// `ceil(q * 2^i)` for `q` in [0, 1].
fn ceil_scaled(q: &BigRational, i: usize) -> BigUint {
    let scaled = q * BigRational::from_integer(BigInt::one() << i);
    let c = scaled.numer().div_ceil(scaled.denom());
    c.to_biguint().expect("non-negative")
}

/// Exact mass of coin prefixes of length at most `depth` on which
/// [`lsc_machine_run`] halts. At stage `i` the halting prefixes are exactly
/// those below `ceil(q_i 2^i) - 1`, so the mass is a running maximum. The
/// upper bound uses the limit when it is known and is 1 otherwise.
pub fn lsc_halting_bounds(p: &LscSequence, depth: usize) -> ProbBounds {
    let mut lower = Dyadic::zero();
    for i in 0..=depth {
        let Some(q) = p.term(i) else { break };
        let c = ceil_scaled(&q, i);
        if c > BigUint::one() {
            let here = Dyadic::new(c - 1u32, i as u32);
            if here > lower {
                lower = here;
            }
        }
    }
    let upper = match p.limit() {
        Some(lim) => {
            let cover = Dyadic::new(ceil_scaled(lim, depth), depth as u32);
            cover.max(lower.clone())
        }
        None => Dyadic::one(),
    };
    ProbBounds {
        lower,
        upper,
        depth: depth as u64,
    }
}

struct Mass<'a> {
    target: Option<&'a BitString>,
    bound: usize,
    entries: BTreeMap<BitString, Dyadic>,
    shortest: BTreeMap<BitString, usize>,
}

impl Visitor for Mass<'_> {
    fn bound(&self) -> usize {
        self.bound
    }

    fn target(&self) -> Option<&BitString> {
        self.target
    }

    fn halt(&mut self, ev: HaltEvent) {
        // Prefix-mode events are single descriptions.
        let len = ev.min_len();
        *self.entries.entry(ev.output.clone()).or_default() += Dyadic::pow2_neg(len as u32);
        let k = self.shortest.entry(ev.output).or_insert(len);
        *k = (*k).min(len);
    }
}

fn prefix_mass(target: Option<&BitString>, b: Budgets) -> Mass<'_> {
    let mut v = Mass {
        target,
        bound: b.max_len,
        entries: BTreeMap::new(),
        shortest: BTreeMap::new(),
    };
    walk(MachineMode::Prefix, &BitString::new(), b.max_steps, &mut v);
    v
}

/// `sum 2^-|d|` over valid prefix descriptions of `x` within the budgets.
pub fn apriori_lower(x: &BitString, b: Budgets) -> Dyadic {
    prefix_mass(Some(x), b).entries.remove(x).unwrap_or_default()
}

/// [`apriori_lower`] for every output reachable within the budgets.
pub fn apriori_table(b: Budgets) -> SemimeasureTable {
    SemimeasureTable {
        entries: prefix_mass(None, b).entries,
        undecided: None,
        budgets: Some(b),
        depth: None,
        machine_version: MACHINE_VERSION.to_string(),
    }
}

/// One row of the coding-theorem comparison: the bounded prefix complexity
/// and the a priori lower bound of the same output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CodingGap {
    pub x: BitString,
    pub k_prefix: u64,
    pub apriori: Dyadic,
    /// `k_prefix + log2 m(x)`; never negative.
    pub gap: f64,
    /// `2^-k_prefix <= m(x)`, checked exactly.
    pub holds: bool,
}

pub fn coding_gaps(b: Budgets) -> Vec<CodingGap> {
    let v = prefix_mass(None, b);
    v.entries
        .into_iter()
        .map(|(x, m)| {
            let k = v.shortest[&x] as u64;
            CodingGap {
                holds: Dyadic::pow2_neg(k as u32) <= m,
                gap: k as f64 - m.neg_log2(),
                k_prefix: k,
                apriori: m,
                x,
            }
        })
        .collect()
}

/// Counts of gaps rounded up to whole bits.
pub fn gap_histogram(gaps: &[CodingGap]) -> BTreeMap<u64, usize> {
    let mut h = BTreeMap::new();
    for g in gaps {
        *h.entry(g.gap.max(0.0).ceil() as u64).or_default() += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitcore::bits;
    use crate::complexity::k_prefix;
    use crate::toyvm::{assemble, run, Coins, Instr::*, RunBudget, RunOutcome};

    fn d(num: u64, exp: u32) -> Dyadic {
        Dyadic::new(num, exp)
    }

    fn rat(n: i64, den: i64) -> BigRational {
        BigRational::new(n.into(), den.into())
    }

    /// Runs every coin string of length `n` through the interpreter.
    fn brute_distribution(code: &BitString, n: usize, steps: u64) -> (BTreeMap<BitString, Dyadic>, Dyadic) {
        let mut halted: BTreeMap<BitString, Dyadic> = BTreeMap::new();
        let mut undecided = Dyadic::zero();
        for v in 0..1u64 << n {
            let coins: BitString = (0..n).map(|i| v >> i & 1 == 1).collect();
            match run(code, MachineMode::Coin, &bits(""), Coins::Bits(&coins), RunBudget::new(steps)) {
                RunOutcome::Halted { output, .. } => *halted.entry(output).or_default() += Dyadic::pow2_neg(n as u32),
                RunOutcome::BudgetExceeded => undecided += Dyadic::pow2_neg(n as u32),
                RunOutcome::Invalid { reason } => panic!("{reason:?}: steps exceed coins"),
            }
        }
        (halted, undecided)
    }

    #[test]
    fn halting_examples() {
        let b = halting_bounds(&assemble(&[End]), 1).unwrap();
        assert_eq!((b.lower, b.upper), (Dyadic::one(), Dyadic::one()));
        let b = halting_bounds(&assemble(&[ReadData, Open, Close, End]), 100).unwrap();
        assert_eq!((b.lower, b.upper), (d(1, 1), Dyadic::one()));
        let b = halting_bounds(&assemble(&[ReadData, ReadData, End]), 10).unwrap();
        assert_eq!((b.lower, b.upper), (Dyadic::one(), Dyadic::one()));
        assert!(matches!(
            halting_bounds(&bits("11110"), 4),
            Err(SemimeasureError::Invalid(InvalidReason::TrailingBits))
        ));
    }

    #[test]
    fn distribution_examples() {
        let t = output_distribution(&assemble(&[End]), 5).unwrap();
        assert_eq!(t.entries, BTreeMap::from([(bits(""), Dyadic::one())]));
        let t = output_distribution(&assemble(&[ReadData, Out, End]), 5).unwrap();
        assert_eq!(t.entries, BTreeMap::from([(bits("0"), d(1, 1)), (bits("1"), d(1, 1))]));
        let t = output_distribution(&assemble(&[ReadData, Open, Close, End]), 50).unwrap();
        assert_eq!(t.entries, BTreeMap::from([(bits(""), d(1, 1))]));
    }

    #[test]
    fn coin_tree_matches_brute_force() {
        // A loop that prints coins until it reads a zero, and one that
        // walks right flipping cells.
        let codes = [
            assemble(&[Flip, Open, ReadData, Out, Close, End]),
            assemble(&[ReadData, Open, Right, ReadData, Out, Flip, Close, ReadData, Out, End]),
            assemble(&[ReadData, Open, ReadData, Open, Out, Close, Flip, Close, End]),
        ];
        for code in &codes {
            for steps in [3u64, 8, 20] {
                // Each step reads at most one coin, so `steps` coins suffice.
                let (halted, undecided) = brute_distribution(code, steps as usize, steps);
                let t = output_distribution(code, steps).unwrap();
                assert_eq!(t.entries, halted, "{code} T={steps}");
                assert_eq!(t.undecided, Some(undecided));
                let b = halting_bounds(code, steps).unwrap();
                assert_eq!(b.lower, t.total());
                assert!(b.upper <= Dyadic::one());
            }
        }
    }

    #[test]
    fn bounds_are_monotone_in_depth() {
        let code = assemble(&[Flip, Open, ReadData, Right, Close, End]);
        let mut prev = halting_bounds(&code, 1).unwrap();
        for depth in 2..40 {
            let b = halting_bounds(&code, depth).unwrap();
            assert!(b.lower >= prev.lower && b.upper <= prev.upper);
            prev = b;
        }
    }

    #[test]
    fn lsc_examples() {
        let one = LscSequence::constant(rat(1, 1)).unwrap();
        assert_eq!(lsc_machine_run(&one, &mut || false, 10), LscRun::Halts { index: 1 });
        let zero = LscSequence::constant(rat(0, 1)).unwrap();
        for c in [false, true] {
            assert_eq!(lsc_machine_run(&zero, &mut || c, 30), LscRun::Undecided);
        }
        let p = LscSequence::constant(rat(5, 8)).unwrap();
        let mut coins = [false, true].into_iter().chain(std::iter::repeat(false));
        assert_eq!(lsc_machine_run(&p, &mut || coins.next().unwrap(), 10), LscRun::Halts { index: 1 });
        let mut coins = [true, false, false].into_iter().chain(std::iter::repeat(false));
        // 0.100... : the cylinder 0.100 + 1/8 = 5/8 is not below 5/8, 0.1000 + 1/16 is.
        assert_eq!(lsc_machine_run(&p, &mut || coins.next().unwrap(), 10), LscRun::Halts { index: 4 });
    }

    /// Runs the machine on every coin prefix of length `depth` and counts
    /// the halting ones.
    fn tree_mass(p: &LscSequence, depth: usize) -> Dyadic {
        let mut count = 0u64;
        for v in 0..1u64 << depth {
            let mut i = 0;
            let mut next = || {
                let c = v >> (depth - 1 - i) & 1 == 1;
                i += 1;
                c
            };
            if let LscRun::Halts { .. } = lsc_machine_run(p, &mut next, depth) {
                count += 1;
            }
        }
        Dyadic::new(count, depth as u32)
    }

    #[test]
    fn lsc_bounds_match_tree() {
        let seqs = [
            LscSequence::constant(rat(5, 8)).unwrap(),
            LscSequence::constant(rat(1, 3)).unwrap(),
            LscSequence::from_terms(vec![rat(0, 1), rat(1, 5), rat(1, 2), rat(2, 3)]).unwrap(),
            LscSequence::from_fn(|i| Some(BigRational::one() - rat(1, 1 << i.min(40))), Some(rat(1, 1))),
        ];
        for p in &seqs {
            for depth in 0..=12 {
                let b = lsc_halting_bounds(p, depth);
                assert_eq!(b.lower, tree_mass(p, depth), "depth {depth}");
                assert!(b.lower <= b.upper);
            }
        }
    }

    #[test]
    fn lsc_halts_iff_cylinder_below_p() {
        for p in [rat(0, 1), rat(1, 2), rat(5, 8), rat(1, 1)] {
            let seq = LscSequence::constant(p.clone()).unwrap();
            for v in 0..1u64 << 12 {
                let mut i = 0;
                let mut next = || {
                    let c = v >> (11 - i) & 1 == 1;
                    i += 1;
                    c
                };
                let halts = matches!(lsc_machine_run(&seq, &mut next, 12), LscRun::Halts { .. });
                assert_eq!(halts, rat(v as i64 + 1, 1 << 12) < p, "p={p} v={v}");
            }
        }
    }

    #[test]
    fn lsc_bound_examples() {
        let b = lsc_halting_bounds(&LscSequence::constant(rat(5, 8)).unwrap(), 20);
        let p = d(5, 3);
        let tol = Dyadic::pow2_neg(18);
        assert!(b.lower <= p && p <= b.upper);
        assert!(&b.lower + &tol >= p && b.upper <= &p + &tol);
        let b = lsc_halting_bounds(&LscSequence::constant(rat(0, 1)).unwrap(), 9);
        assert_eq!((b.lower, b.upper), (Dyadic::zero(), Dyadic::zero()));
        let to_one = LscSequence::from_fn(|i| Some(BigRational::one() - rat(1, 1 << i)), Some(rat(1, 1)));
        for depth in 1..20 {
            let b = lsc_halting_bounds(&to_one, depth);
            assert!(&b.lower + &Dyadic::pow2_neg(depth as u32 - 1) >= Dyadic::one());
            assert_eq!(b.upper, Dyadic::one());
        }
        let stalled = LscSequence::from_fn(|i| (i < 3).then(|| rat(1, 2)), None);
        assert_eq!(lsc_machine_run(&stalled, &mut || true, 10), LscRun::Undecided);
        assert_eq!(lsc_halting_bounds(&stalled, 10).upper, Dyadic::one());
    }

    #[test]
    fn bad_sequences() {
        assert!(LscSequence::from_terms(vec![rat(1, 2), rat(1, 3)]).is_err());
        assert!(LscSequence::from_terms(vec![rat(3, 2)]).is_err());
        assert!(LscSequence::from_terms(vec![]).is_err());
    }

    #[test]
    fn apriori_examples() {
        let b = Budgets::new(4, 10);
        // "1111" (END) and "1110" (READC on the empty condition) both halt.
        assert_eq!(apriori_lower(&bits(""), b), Dyadic::pow2_neg(3));
        assert_eq!(apriori_lower(&bits("1"), b), Dyadic::zero());
        let b = Budgets::new(14, 64);
        let table = apriori_table(b);
        assert!(table.total() <= Dyadic::one());
        for (x, m) in &table.entries {
            assert_eq!(*m, apriori_lower(x, b));
            let k = k_prefix(x, b).value.bits().unwrap();
            assert!(Dyadic::pow2_neg(k as u32) <= *m);
        }
        assert!(coding_gaps(b).iter().all(|g| g.holds && g.gap >= 0.0));
    }
}
