//! Exhaustive search over descriptions by walking the tree of machine
//! configurations. A branch is opened only when the machine actually asks
//! for a bit, so every suffix the machine never reads is covered by a single
//! path instead of being enumerated bit by bit.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::machine::{Event, HaltCause, Machine, Source, Stream};
use super::{Instr, MachineMode, RunBudget};
use crate::bitcore::BitString;

/// One halting description produced by [`enumerate_halting`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HaltingEntry {
    pub description: BitString,
    pub output: BitString,
    pub steps: u64,
}

/// A halting path of the search tree. It stands for a family of
/// descriptions that all behave identically: in Plain mode the code segment
/// may still need closing brackets and END, and data the machine never read
/// may follow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct HaltEvent {
    pub code: BitString,
    pub data: BitString,
    /// `Some(k)`: the code segment is unfinished with `k` open brackets.
    pub unfinished: Option<usize>,
    /// Unread data bits may be appended.
    pub extendable: bool,
    pub output: BitString,
    pub steps: u64,
}

impl HaltEvent {
    fn from_machine(m: &Machine, cause: HaltCause, mode: MachineMode) -> Self {
        match mode {
            MachineMode::Prefix => HaltEvent {
                code: m.desc.bits.clone(),
                data: BitString::new(),
                unfinished: None,
                extendable: false,
                output: m.output.clone(),
                steps: m.steps,
            },
            _ => HaltEvent {
                code: m.desc.bits.clone(),
                data: m.data.bits.clone(),
                unfinished: (!m.code_done()).then(|| m.open_brackets()),
                extendable: cause != HaltCause::DataExhausted,
                output: m.output.clone(),
                steps: m.steps,
            },
        }
    }

    fn min_completion_len(&self) -> usize {
        self.unfinished.map_or(0, |k| 3 * k + Instr::End.width())
    }

    pub fn min_len(&self) -> usize {
        self.code.len() + self.min_completion_len() + self.data.len()
    }

    /// The shortest description of the family: missing CLOSEs, END, then
    /// exactly the data that was read. It is unique.
    pub fn min_description(&self) -> BitString {
        let mut d = self.code.clone();
        if let Some(k) = self.unfinished {
            for _ in 0..k {
                Instr::Close.encode_into(&mut d);
            }
            Instr::End.encode_into(&mut d);
        }
        d.extend_from(&self.data);
        d
    }

    /// Calls `f` with every description of the family of exactly `len` bits.
    pub fn for_each_of_len(&self, len: usize, f: &mut impl FnMut(BitString)) {
        if len < self.min_len() {
            return;
        }
        let base = self.code.len() + self.data.len();
        let completions: Vec<BitString> = match self.unfinished {
            None => vec![BitString::new()],
            Some(k) => {
                let mut all = Vec::new();
                let max = len - base;
                for n in self.min_completion_len()..=max {
                    if !self.extendable && n != max {
                        continue;
                    }
                    completions_exact(k, n, &mut BitString::new(), &mut all);
                }
                all
            }
        };
        for c in completions {
            let fill = len - base - c.len();
            if fill > 0 && !self.extendable {
                continue;
            }
            let mut head = self.code.concat(&c);
            head.extend_from(&self.data);
            for_each_string(fill, &mut |s| f(head.concat(s)));
        }
    }
}

/// All instruction sequences of exactly `n` bits that close `depth` open
/// brackets and end with their first END.
fn completions_exact(depth: usize, n: usize, cur: &mut BitString, out: &mut Vec<BitString>) {
    for instr in Instr::ALL {
        let w = instr.width();
        if w > n {
            continue;
        }
        match instr {
            Instr::End => {
                if depth == 0 && w == n {
                    let mut c = cur.clone();
                    instr.encode_into(&mut c);
                    out.push(c);
                }
                continue;
            }
            Instr::Close if depth == 0 => continue,
            _ => {}
        }
        let next_depth = match instr {
            Instr::Open => depth + 1,
            Instr::Close => depth - 1,
            _ => depth,
        };
        // Closing every bracket and END must still fit.
        if 3 * next_depth + Instr::End.width() > n - w {
            continue;
        }
        let mark = cur.len();
        instr.encode_into(cur);
        completions_exact(next_depth, n - w, cur, out);
        cur.truncate(mark);
    }
}

fn for_each_string(n: usize, f: &mut impl FnMut(&BitString)) {
    let mut s = BitString::zeros(n);
    if n == 0 {
        f(&s);
        return;
    }
    loop {
        f(&s);
        // Binary increment; stop after wrapping around.
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if s.get(i) == Some(false) {
                s.truncate(i);
                s.push(true);
                while s.len() < n {
                    s.push(false);
                }
                break;
            }
        }
    }
}

pub(crate) trait Visitor {
    /// Largest description length still of interest; may shrink as the
    /// search proceeds.
    fn bound(&self) -> usize;

    /// When set, only paths whose output stays a prefix of this string are
    /// explored and only exact matches are reported.
    fn target(&self) -> Option<&BitString> {
        None
    }

    fn halt(&mut self, event: HaltEvent);

    /// Only the shortest descriptions per output matter, so code that can
    /// be shortened without changing its behavior may be skipped.
    fn minimal_only(&self) -> bool {
        false
    }
}

/// Instructions that no shortest program places after `prev` (`None`: at
/// the start). Deleting them, together with `prev` for the no-op pairs,
/// gives a shorter description with the same output and no jump can land
/// in between, since jumps only target positions after OPEN or CLOSE.
fn never_minimal(prev: Option<Instr>, next: Instr) -> bool {
    use Instr::*;
    match prev {
        // The blank tape is shift invariant, and a leading OPEN sees a zero
        // cell and skips its whole block for good.
        None => matches!(next, Left | Right | Open),
        // A no-op, or for OPEN CLOSE a no-op or an endless loop.
        Some(p) => {
            matches!((p, next), (Left, Right) | (Right, Left) | (Flip, Flip) | (Open, Close))
                || (next == End && matches!(p, Left | Right | Flip | ReadData | ReadCond))
        }
    }
}

pub(crate) fn walk(mode: MachineMode, condition: &BitString, max_steps: u64, v: &mut impl Visitor) {
    if mode == MachineMode::Coin {
        return;
    }
    let cond = Arc::new(condition.clone());
    let mut stack = vec![Machine::new(mode, Stream::open(), Stream::open(), cond)];
    while let Some(mut m) = stack.pop() {
        let mut out_len = m.output.len();
        loop {
            match m.step(max_steps) {
                Event::Continue => {
                    if m.output.len() != out_len {
                        out_len = m.output.len();
                        if let Some(t) = v.target() {
                            if t.get(out_len - 1) != m.output.get(out_len - 1) {
                                break;
                            }
                        }
                    }
                }
                Event::Need(src) => {
                    let bound = v.bound();
                    if mode == MachineMode::Plain && src == Source::Data {
                        let mut closed = m.clone();
                        closed.close(src);
                        if closed.min_final_len() <= bound {
                            stack.push(closed);
                        }
                    }
                    let mut one = m.clone();
                    one.supply(src, true);
                    m.supply(src, false);
                    if one.min_final_len() <= bound {
                        stack.push(one);
                    }
                    if m.min_final_len() <= bound {
                        stack.push(m);
                    }
                    break;
                }
                Event::NeedInstr => {
                    let bound = v.bound();
                    let minimal = v.minimal_only();
                    let last = m.last_instr();
                    for instr in Instr::ALL {
                        if minimal && never_minimal(last, instr) {
                            continue;
                        }
                        let mut child = m.clone();
                        if child.supply_instr(instr).is_ok() && child.min_final_len() <= bound {
                            stack.push(child);
                        }
                    }
                    break;
                }
                Event::Halt(cause) => {
                    if v.target().is_none_or(|t| *t == m.output) {
                        let ev = HaltEvent::from_machine(&m, cause, mode);
                        if ev.min_len() <= v.bound() {
                            v.halt(ev);
                        }
                    }
                    break;
                }
                Event::Fail(_) | Event::OutOfBudget => break,
            }
        }
    }
}

struct Collect {
    max_len: usize,
    events: Vec<HaltEvent>,
}

impl Visitor for Collect {
    fn bound(&self) -> usize {
        self.max_len
    }

    fn halt(&mut self, event: HaltEvent) {
        self.events.push(event);
    }
}

pub(crate) fn collect_events(
    mode: MachineMode,
    condition: &BitString,
    max_len: usize,
    max_steps: u64,
) -> Vec<HaltEvent> {
    let mut c = Collect {
        max_len,
        events: Vec::new(),
    };
    walk(mode, condition, max_steps, &mut c);
    c.events
}

/// Every description of at most `max_len` bits that halts within the budget,
/// each exactly once, in (length, lexicographic) order.
///
/// Coin-mode descriptions have no fixed output, so Coin mode yields nothing.
pub fn enumerate_halting(
    mode: MachineMode,
    condition: &BitString,
    max_len: usize,
    budget: RunBudget,
) -> impl Iterator<Item = HaltingEntry> {
    let events = collect_events(mode, condition, max_len, budget.max_steps);
    Levels {
        events,
        next_len: 0,
        max_len,
        current: Vec::new().into_iter(),
    }
}

struct Levels {
    events: Vec<HaltEvent>,
    next_len: usize,
    max_len: usize,
    current: std::vec::IntoIter<HaltingEntry>,
}

impl Iterator for Levels {
    type Item = HaltingEntry;

    fn next(&mut self) -> Option<HaltingEntry> {
        loop {
            if let Some(e) = self.current.next() {
                return Some(e);
            }
            if self.next_len > self.max_len {
                return None;
            }
            let len = self.next_len;
            self.next_len += 1;
            let mut level = Vec::new();
            for ev in &self.events {
                ev.for_each_of_len(len, &mut |description| {
                    level.push(HaltingEntry {
                        description,
                        output: ev.output.clone(),
                        steps: ev.steps,
                    })
                });
            }
            level.sort_by(|a, b| a.description.cmp(&b.description));
            self.current = level.into_iter();
        }
    }
}
