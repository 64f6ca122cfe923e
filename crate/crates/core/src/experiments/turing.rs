use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sym {
    Blank,
    Zero,
    One,
    A,
    B,
    M,
}

impl Sym {
    pub fn bit(b: bool) -> Self {
        if b { Sym::One } else { Sym::Zero }
    }

    fn to_char(self) -> char {
        match self {
            Sym::Blank => '_',
            Sym::Zero => '0',
            Sym::One => '1',
            Sym::A => 'A',
            Sym::B => 'B',
            Sym::M => 'M',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    Left,
    Right,
    Stay,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TmError {
    #[error("no halt within {cap} steps")]
    StepCap { cap: u64 },
    #[error("head moved off the left end at step {step}")]
    LeftEnd { step: u64 },
    #[error("no transition for state {state} on {sym:?}")]
    Stuck { state: String, sym: Sym },
}

/// Deterministic one-tape machine. The tape is blank at cell 0, the input
/// starts at cell 1 and the head starts there.
#[derive(Clone, Debug)]
pub struct OneTapeTM {
    pub states: Vec<&'static str>,
    pub table: BTreeMap<(usize, Sym), (usize, Sym, Move)>,
    pub initial: usize,
    pub halt: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TmRun {
    pub steps: u64,
    /// Contents from cell 1 up to the last non-blank cell.
    pub output: Vec<Sym>,
    /// `crossings[u]` counts left-to-right head moves across the boundary
    /// between cells `u` and `u + 1`.
    pub crossings: Vec<u64>,
}

impl OneTapeTM {
    pub fn run(&self, input: &[Sym], cap: u64) -> Result<TmRun, TmError> {
        let mut tape = vec![Sym::Blank];
        tape.extend_from_slice(input);
        let mut crossings = vec![0u64; tape.len()];
        let (mut state, mut head, mut steps) = (self.initial, 1usize, 0u64);
        while state != self.halt {
            if steps == cap {
                return Err(TmError::StepCap { cap });
            }
            if head == tape.len() {
                tape.push(Sym::Blank);
                crossings.push(0);
            }
            let sym = tape[head];
            let &(next, write, mv) = self.table.get(&(state, sym)).ok_or_else(|| TmError::Stuck {
                state: self.states[state].to_string(),
                sym,
            })?;
            tape[head] = write;
            steps += 1;
            match mv {
                Move::Left => {
                    head = head.checked_sub(1).ok_or(TmError::LeftEnd { step: steps })?;
                }
                Move::Right => {
                    crossings[head] += 1;
                    head += 1;
                }
                Move::Stay => {}
            }
            state = next;
        }
        let end = tape.iter().rposition(|&s| s != Sym::Blank).unwrap_or(0);
        Ok(TmRun {
            steps,
            output: tape[1..=end].to_vec(),
            crossings,
        })
    }
}

pub fn render(tape: &[Sym]) -> String {
    tape.iter().map(|s| s.to_char()).collect()
}

pub fn parse_tape(s: &str) -> Vec<Sym> {
    s.chars()
        .map(|c| match c {
            '0' => Sym::Zero,
            '1' => Sym::One,
            _ => panic!("input tapes are binary"),
        })
        .collect()
}

/// Machine that turns `w` into `ww` for binary `w`.
///
/// It writes a marker M after `w`, then copies `w` symbol by symbol behind
/// the marker (each source symbol is marked A or B while it is carried),
/// bubbles M to the right end and erases it, and finally turns A/B back
/// into 0/1 on the way to the left end.
pub fn duplicator() -> OneTapeTM {
    use Move::*;
    use Sym::*;
    let states = vec![
        "seek", "rewind", "pick", "carry0", "carry1", "back", "bub", "bub2", "put0", "put1",
        "erase", "restore", "halt",
    ];
    let id = |name: &str| states.iter().position(|s| *s == name).expect("state");
    let mut table = BTreeMap::new();
    let mut add = |s: &str, r: Sym, n: &str, w: Sym, m: Move| {
        table.insert((id(s), r), (id(n), w, m));
    };
    add("seek", Zero, "seek", Zero, Right);
    add("seek", One, "seek", One, Right);
    add("seek", Blank, "rewind", M, Left);
    add("rewind", Zero, "rewind", Zero, Left);
    add("rewind", One, "rewind", One, Left);
    add("rewind", M, "rewind", M, Left);
    add("rewind", Blank, "pick", Blank, Right);
    add("pick", Zero, "carry0", A, Right);
    add("pick", One, "carry1", B, Right);
    add("pick", M, "bub", M, Stay);
    for (carry, write) in [("carry0", Zero), ("carry1", One)] {
        for s in [Zero, One, M] {
            add(carry, s, carry, s, Right);
        }
        add(carry, Blank, "back", write, Left);
    }
    for s in [Zero, One, M] {
        add("back", s, "back", s, Left);
    }
    add("back", A, "pick", A, Right);
    add("back", B, "pick", B, Right);
    add("bub", M, "bub2", M, Right);
    add("bub2", Zero, "put0", M, Left);
    add("bub2", One, "put1", M, Left);
    add("put0", M, "bub", Zero, Right);
    add("put1", M, "bub", One, Right);
    add("bub2", Blank, "erase", Blank, Left);
    add("erase", M, "restore", Blank, Left);
    add("restore", Zero, "restore", Zero, Left);
    add("restore", One, "restore", One, Left);
    add("restore", A, "restore", Zero, Left);
    add("restore", B, "restore", One, Left);
    add("restore", Blank, "halt", Blank, Stay);
    OneTapeTM { initial: id("seek"), halt: id("halt"), states, table }
}
