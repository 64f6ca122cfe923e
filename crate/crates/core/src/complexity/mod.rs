//! Resource-bounded complexity over TBF-1.
//!
//! Every value here is exact for its budgets: the search visits every
//! description up to `max_len` bits that halts within `max_steps`, so a
//! reported value is the true bounded minimum and an upper bound on the
//! unbounded one.

mod kt;
pub(crate) mod search;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bitcore::{pair_encode, BitString};
use crate::toyvm::{MachineMode, LITERAL_OVERHEAD, MACHINE_VERSION};
pub use kt::{kt_bits, kt_codelength, KT_HEADER_BITS};

/// Search cutoffs: description length in bits and steps per run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Budgets {
    pub max_len: usize,
    pub max_steps: u64,
}

impl Budgets {
    pub fn new(max_len: usize, max_steps: u64) -> Self {
        assert!(max_steps >= 1, "max_steps must be at least 1");
        Budgets { max_len, max_steps }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateKind {
    ExactBounded,
    CompressorUpper,
}

/// A complexity value, or `NotFound` when nothing within the budgets
/// produces the target. Serializes as a number or the string `"not_found"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Value {
    Bits(u64),
    NotFound,
}

impl Value {
    pub fn bits(self) -> Option<u64> {
        match self {
            Value::Bits(b) => Some(b),
            Value::NotFound => None,
        }
    }
}

impl Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Bits(b) => s.serialize_u64(*b),
            Value::NotFound => s.serialize_str("not_found"),
        }
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Bits(u64),
            Tag(String),
        }
        match Raw::deserialize(d)? {
            Raw::Bits(b) => Ok(Value::Bits(b)),
            Raw::Tag(t) if t == "not_found" => Ok(Value::NotFound),
            Raw::Tag(t) => Err(serde::de::Error::custom(format!("bad complexity value {t:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityEstimate {
    pub value: Value,
    pub kind: EstimateKind,
    pub budgets: Option<Budgets>,
    pub witness: Option<BitString>,
    /// Steps the witness takes; absent for compressor bounds.
    pub steps: Option<u64>,
    pub machine_version: String,
}

impl ComplexityEstimate {
    fn exact(found: Option<search::Found>, b: Budgets) -> Self {
        Self::from_witness(found.map(|f| (f.description, f.steps)), b)
    }

    /// Bounded estimate from a shortest description and its step count.
    pub fn from_witness(found: Option<(BitString, u64)>, b: Budgets) -> Self {
        let (value, witness, steps) = match found {
            Some((d, steps)) => (Value::Bits(d.len() as u64), Some(d), Some(steps)),
            None => (Value::NotFound, None, None),
        };
        ComplexityEstimate {
            value,
            kind: EstimateKind::ExactBounded,
            budgets: Some(b),
            witness,
            steps,
            machine_version: MACHINE_VERSION.to_string(),
        }
    }
}

fn bounded(mode: MachineMode, x: &BitString, condition: &BitString, b: Budgets) -> ComplexityEstimate {
    ComplexityEstimate::exact(search::shortest(mode, condition, x, b.max_len, b.max_steps), b)
}

/// Bounded plain complexity, optionally conditional on `condition`.
pub fn c_plain(x: &BitString, b: Budgets, condition: &BitString) -> ComplexityEstimate {
    bounded(MachineMode::Plain, x, condition, b)
}

pub fn c_cond(x: &BitString, y: &BitString, b: Budgets) -> ComplexityEstimate {
    bounded(MachineMode::Plain, x, y, b)
}

/// Bounded prefix complexity: shortest Prefix-mode description that is read
/// exactly to its end.
pub fn k_prefix(x: &BitString, b: Budgets) -> ComplexityEstimate {
    bounded(MachineMode::Prefix, x, &BitString::new(), b)
}

/// Plain complexity of the pair encoding of `(x, y)`.
pub fn c_pair(x: &BitString, y: &BitString, b: Budgets) -> ComplexityEstimate {
    c_plain(&pair_encode(x, y), b, &BitString::new())
}

/// Time-bounded approximation: the bounded plain complexity if found,
/// else the literal-copier length `|x| + 25`. Capped at that length so the
/// value never increases as `t` or `max_len` grow.
pub fn k_approx(x: &BitString, t: u64, max_len: usize) -> u64 {
    let fallback = (x.len() + LITERAL_OVERHEAD) as u64;
    if t == 0 {
        return fallback;
    }
    // Anything of length >= fallback cannot improve the answer.
    let len = max_len.min(x.len() + LITERAL_OVERHEAD - 1);
    match search::shortest(MachineMode::Plain, &BitString::new(), x, len, t) {
        Some(f) => f.description.len() as u64,
        None => fallback,
    }
}

/// KT codelength as a compressor-based upper bound.
pub fn kt_estimate(x: &BitString) -> ComplexityEstimate {
    ComplexityEstimate {
        value: Value::Bits(kt_codelength(x)),
        kind: EstimateKind::CompressorUpper,
        budgets: None,
        witness: None,
        steps: None,
        machine_version: MACHINE_VERSION.to_string(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Estimator {
    Kt,
    ExactBounded { budgets: Budgets },
}

/// `|x|` minus the estimate; `None` when a bounded search finds nothing.
pub fn deficiency(x: &BitString, estimator: Estimator) -> Option<i64> {
    let est = match estimator {
        Estimator::Kt => kt_codelength(x),
        Estimator::ExactBounded { budgets } => c_plain(x, budgets, &BitString::new()).value.bits()?,
    };
    Some(x.len() as i64 - est as i64)
}

/// Canonical shortest descriptions of every output reachable within the
/// budgets, keyed by output.
pub fn complexity_table(
    mode: MachineMode,
    condition: &BitString,
    b: Budgets,
) -> BTreeMap<BitString, ComplexityEstimate> {
    search::shortest_table(mode, condition, b.max_len, b.max_steps)
        .into_iter()
        .map(|(x, f)| (x, ComplexityEstimate::exact(Some(f), b)))
        .collect()
}
