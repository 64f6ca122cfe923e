use std::collections::BTreeMap;

use crate::bitcore::BitString;
use crate::toyvm::{walk, HaltEvent, MachineMode, Visitor};

/// Shortest description found, compared shortlex so the witness is
/// canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Found {
    pub description: BitString,
    pub steps: u64,
}

struct Shortest<'a> {
    target: &'a BitString,
    bound: usize,
    best: Option<Found>,
}

impl Visitor for Shortest<'_> {
    fn bound(&self) -> usize {
        self.bound
    }

    fn target(&self) -> Option<&BitString> {
        Some(self.target)
    }

    fn minimal_only(&self) -> bool {
        true
    }

    fn halt(&mut self, ev: HaltEvent) {
        let d = ev.min_description();
        if self.best.as_ref().is_none_or(|b| d < b.description) {
            self.bound = d.len();
            self.best = Some(Found {
                description: d,
                steps: ev.steps,
            });
        }
    }
}

/// Shortest description of `target` with at most `max_len` bits, searched by
/// iterative deepening so short answers never pay for the full bound.
pub(crate) fn shortest(
    mode: MachineMode,
    condition: &BitString,
    target: &BitString,
    max_len: usize,
    max_steps: u64,
) -> Option<Found> {
    // No description is shorter than a single END.
    let mut bound = 4.min(max_len);
    loop {
        let mut v = Shortest {
            target,
            bound,
            best: None,
        };
        walk(mode, condition, max_steps, &mut v);
        if v.best.is_some() || bound >= max_len {
            return v.best;
        }
        bound = (bound + 1).max(bound + bound / 8).min(max_len);
    }
}

struct Table {
    bound: usize,
    best: BTreeMap<BitString, Found>,
}

impl Visitor for Table {
    fn bound(&self) -> usize {
        self.bound
    }

    fn minimal_only(&self) -> bool {
        true
    }

    fn halt(&mut self, ev: HaltEvent) {
        let d = ev.min_description();
        let slot = self.best.entry(ev.output).or_insert_with(|| Found {
            description: d.clone(),
            steps: ev.steps,
        });
        if d < slot.description {
            *slot = Found {
                description: d,
                steps: ev.steps,
            };
        }
    }
}

/// Every output reachable within the budgets with its canonical shortest
/// description.
pub(crate) fn shortest_table(
    mode: MachineMode,
    condition: &BitString,
    max_len: usize,
    max_steps: u64,
) -> BTreeMap<BitString, Found> {
    let mut t = Table {
        bound: max_len,
        best: BTreeMap::new(),
    };
    walk(mode, condition, max_steps, &mut t);
    t.best
}
