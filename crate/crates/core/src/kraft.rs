//! Online Kraft–Chaitin allocation with the best-fit rule.
//!
//! Free space is a set of aligned dyadic segments, one codeword each, with
//! pairwise distinct lengths. A request for length `n` takes the smallest
//! free segment that is still large enough, keeps its leftmost piece of the
//! requested size and returns the rest as segments of sizes
//! `w, 2w, 4w, ...`. Memory is never freed.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitcore::{BitString, Dyadic};

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum KraftError {
    #[error("no free segment can hold a codeword of length {n}")]
    Overflow { n: usize },
}

/// A batch that overflowed at request `index`, with everything granted
/// before it.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("overflow at request {index}")]
pub struct BatchOverflow {
    pub index: usize,
    pub granted: Vec<BitString>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AllocatorState {
    /// Free segments keyed by codeword length.
    free: BTreeMap<usize, BitString>,
    allocated: Vec<BitString>,
}

impl Default for AllocatorState {
    fn default() -> Self {
        Self::new()
    }
}

impl AllocatorState {
    /// One free segment covering everything.
    pub fn new() -> Self {
        AllocatorState {
            free: BTreeMap::from([(0, BitString::new())]),
            allocated: Vec::new(),
        }
    }

    pub fn free(&self) -> impl Iterator<Item = &BitString> {
        self.free.values()
    }

    pub fn allocated(&self) -> &[BitString] {
        &self.allocated
    }

    pub fn free_measure(&self) -> Dyadic {
        self.free.keys().map(|&l| Dyadic::pow2_neg(l as u32)).sum()
    }

    pub fn allocated_measure(&self) -> Dyadic {
        self.allocated
            .iter()
            .map(|c| Dyadic::pow2_neg(c.len() as u32))
            .sum()
    }

    /// Grants a codeword of exactly `n` bits.
    pub fn allocate(&mut self, n: usize) -> Result<BitString, KraftError> {
        let (&len, _) = self
            .free
            .range(..=n)
            .next_back()
            .ok_or(KraftError::Overflow { n })?;
        let u = self.free.remove(&len).expect("present");
        let mut piece = u.clone();
        for _ in len..n {
            piece.push(false);
        }
        for k in (0..n - len).rev() {
            let mut rest = u.clone();
            rest.extend_from(&BitString::zeros(k));
            rest.push(true);
            let clash = self.free.insert(rest.len(), rest);
            assert!(clash.is_none(), "free segments must have distinct lengths");
        }
        self.allocated.push(piece.clone());
        Ok(piece)
    }
}

pub fn allocator_new() -> AllocatorState {
    AllocatorState::new()
}

/// Allocates every request in order.
pub fn kraft_code(requests: &[usize]) -> Result<Vec<BitString>, BatchOverflow> {
    let mut state = AllocatorState::new();
    let mut granted = Vec::with_capacity(requests.len());
    for (index, &n) in requests.iter().enumerate() {
        match state.allocate(n) {
            Ok(c) => granted.push(c),
            Err(KraftError::Overflow { .. }) => return Err(BatchOverflow { index, granted }),
        }
    }
    Ok(granted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitcore::bits;
    use proptest::prelude::*;

    fn strs(v: &[BitString]) -> Vec<String> {
        v.iter().map(|b| b.to_string()).collect()
    }

    /// Best fit replayed on integer intervals `[start, start + 2^(D - n))` of
    /// a 2^D grid.
    fn interval_oracle(requests: &[usize]) -> Result<Vec<BitString>, usize> {
        const D: usize = 40;
        let mut free: Vec<(u64, usize)> = vec![(0, 0)];
        let mut out = Vec::new();
        for (i, &n) in requests.iter().enumerate() {
            let Some(pos) = free
                .iter()
                .enumerate()
                .filter(|(_, s)| s.1 <= n)
                .max_by_key(|(_, s)| s.1)
                .map(|(p, _)| p)
            else {
                return Err(i);
            };
            let (start, len) = free.remove(pos);
            for l in len + 1..=n {
                free.push((start + (1u64 << (D - l)), l));
            }
            out.push((0..n).map(|b| start >> (D - 1 - b) & 1 == 1).collect());
        }
        Ok(out)
    }

    fn prefix_free(code: &[BitString]) -> bool {
        code.iter().enumerate().all(|(i, a)| {
            code.iter()
                .enumerate()
                .all(|(j, b)| i == j || !a.is_prefix_of(b))
        })
    }

    #[test]
    fn fresh_state() {
        let s = allocator_new();
        assert_eq!(s.free().cloned().collect::<Vec<_>>(), vec![bits("")]);
        assert_eq!(s.free_measure(), Dyadic::one());
        assert!(s.allocated().is_empty());
    }

    #[test]
    fn best_fit_examples() {
        assert_eq!(strs(&kraft_code(&[1, 2, 3, 3]).unwrap()), ["0", "10", "110", "111"]);
        assert_eq!(strs(&kraft_code(&[2, 1, 2]).unwrap()), ["00", "1", "01"]);
        assert_eq!(strs(&kraft_code(&[1, 1]).unwrap()), ["0", "1"]);
        assert_eq!(kraft_code(&[]).unwrap(), Vec::<BitString>::new());
        let eight = kraft_code(&[3; 8]).unwrap();
        assert_eq!(strs(&eight), ["000", "001", "010", "011", "100", "101", "110", "111"]);
        let err = kraft_code(&[1, 1, 1]).unwrap_err();
        assert_eq!(err.index, 2);
        assert_eq!(strs(&err.granted), ["0", "1"]);
    }

    #[test]
    fn zero_length_request() {
        assert_eq!(kraft_code(&[0]).unwrap(), vec![bits("")]);
        assert_eq!(kraft_code(&[0, 5]).unwrap_err().index, 1);
        assert_eq!(kraft_code(&[3, 0]).unwrap_err().index, 1);
    }

    #[test]
    fn matches_interval_oracle() {
        for reqs in [vec![1, 2, 3, 3], vec![2, 1, 2], vec![3, 1, 4, 2, 4, 5, 6, 6], vec![5, 1, 5, 2, 3, 5, 4, 5, 5]] {
            assert_eq!(kraft_code(&reqs).map_err(|e| e.index), interval_oracle(&reqs));
        }
    }

    /// Request sequences whose running Kraft sum stays at most one.
    fn feasible() -> impl Strategy<Value = Vec<usize>> {
        prop::collection::vec(1usize..12, 0..40).prop_map(|raw| {
            let mut used = 0u64;
            raw.into_iter()
                .filter(|&n| {
                    let w = 1u64 << (12 - n);
                    (used + w <= 1 << 12).then(|| used += w).is_some()
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn feasible_sequences_are_granted(reqs in feasible()) {
            let mut s = allocator_new();
            for &n in &reqs {
                let c = s.allocate(n).unwrap();
                prop_assert_eq!(c.len(), n);
                let lens: Vec<usize> = s.free().map(|f| f.len()).collect();
                let mut dedup = lens.clone();
                dedup.dedup();
                prop_assert_eq!(lens, dedup);
                prop_assert_eq!(s.free_measure() + s.allocated_measure(), Dyadic::one());
                let union: Vec<BitString> = s.free().chain(s.allocated()).cloned().collect();
                prop_assert!(prefix_free(&union));
            }
            prop_assert_eq!(kraft_code(&reqs).map_err(|e| e.index), interval_oracle(&reqs));
        }

        #[test]
        fn overflow_at_first_violation(raw in prop::collection::vec(1usize..6, 1..30)) {
            let mut used = 0u64;
            let first_bad = raw.iter().position(|&n| {
                used += 1 << (6 - n);
                used > 64
            });
            match (kraft_code(&raw), first_bad) {
                (Ok(c), None) => prop_assert_eq!(c.len(), raw.len()),
                (Err(e), Some(i)) => prop_assert_eq!(e.index, i),
                (got, want) => prop_assert!(false, "{:?} vs {:?}", got, want),
            }
        }
    }
}
