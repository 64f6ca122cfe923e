//! TBF-1, the fixed toy machine that serves as the reference decompressor.
//!
//! A single binary work tape (unbounded both ways, initially zero), an
//! output buffer, and nine instructions:
//!
//! | bits   | instr | effect                                              |
//! |--------|-------|-----------------------------------------------------|
//! | `000`  | LEFT  | head left                                           |
//! | `001`  | RIGHT | head right                                          |
//! | `010`  | FLIP  | invert current cell                                 |
//! | `011`  | OUT   | append current cell to output                       |
//! | `100`  | OPEN  | if cell = 0, jump past the matching CLOSE           |
//! | `101`  | CLOSE | if cell = 1, jump just after the matching OPEN      |
//! | `110`  | READD | load next data / coin / description bit into cell   |
//! | `1110` | READC | load next condition bit into cell                   |
//! | `1111` | END   | halt                                                |
//!
//! Every executed instruction costs one step. Running out of data (Plain) or
//! of condition bits on a read is a normal halt with the output so far.
//!
//! Plain mode: the code segment runs from bit 0 to the first END, brackets
//! are matched statically inside it, and all remaining bits are data.
//! Prefix mode: instructions and READD bits are consumed from the
//! description on demand; a description is valid only if the machine halts
//! having read exactly all of it, which makes the valid set prefix-free.
//! Coin mode: Plain layout with no data segment; READD draws coin flips.

mod enumerate;
mod instr;
pub(crate) mod machine;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bitcore::BitString;
pub use enumerate::{enumerate_halting, HaltingEntry};
pub(crate) use enumerate::{walk, HaltEvent, Visitor};
pub use instr::{assemble, condition_copier, literal_program, Instr};
pub use machine::HaltCause;
use machine::{Event, Machine, Stream};

pub const MACHINE_VERSION: &str = "TBF-1";

/// Length of the literal copier's code segment: `C(x) <= |x| + LITERAL_OVERHEAD`.
pub const LITERAL_OVERHEAD: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MachineMode {
    Plain,
    Prefix,
    Coin,
}

impl fmt::Display for MachineMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MachineMode::Plain => "plain",
            MachineMode::Prefix => "prefix",
            MachineMode::Coin => "coin",
        })
    }
}

/// Step limit for one run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RunBudget {
    pub max_steps: u64,
}

impl RunBudget {
    pub fn new(max_steps: u64) -> Self {
        RunBudget { max_steps }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvalidReason {
    /// Plain/Coin: the bits end before an END closes the code segment.
    UnterminatedCode,
    UnmatchedBracket,
    /// Prefix: halted without having read the whole description.
    InexactConsumption,
    /// Prefix: asked for a bit beyond the end of the description.
    NeedsMoreBits,
    /// Coin: bits after the code segment.
    TrailingBits,
    /// Coin: a finite coin sequence ran out.
    CoinsExhausted,
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InvalidReason::UnterminatedCode => "unterminated code segment",
            InvalidReason::UnmatchedBracket => "unmatched bracket",
            InvalidReason::InexactConsumption => "halted before consuming the whole description",
            InvalidReason::NeedsMoreBits => "machine read past the end of the description",
            InvalidReason::TrailingBits => "bits after the code segment",
            InvalidReason::CoinsExhausted => "coin sequence exhausted",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RunOutcome {
    Halted {
        output: BitString,
        steps: u64,
        consumed: usize,
    },
    BudgetExceeded,
    Invalid {
        reason: InvalidReason,
    },
}

impl RunOutcome {
    pub fn output(&self) -> Option<&BitString> {
        match self {
            RunOutcome::Halted { output, .. } => Some(output),
            _ => None,
        }
    }

    pub fn is_halted(&self) -> bool {
        matches!(self, RunOutcome::Halted { .. })
    }
}

/// Where Coin-mode READD gets its bits.
pub enum Coins<'a> {
    None,
    Bits(&'a BitString),
    Generator(&'a mut dyn FnMut() -> bool),
}

/// Splits off the Plain/Coin code segment: returns its length in bits after
/// checking termination and static bracket matching.
pub fn code_segment_len(desc: &BitString) -> Result<usize, InvalidReason> {
    let mut pos = 0;
    let mut depth = 0usize;
    loop {
        let bit = |i: usize| desc.get(pos + i);
        let (b0, b1, b2) = match (bit(0), bit(1), bit(2)) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => return Err(InvalidReason::UnterminatedCode),
        };
        let instr = match Instr::from_triple(b0, b1, b2) {
            Some(i) => i,
            None => Instr::from_long(bit(3).ok_or(InvalidReason::UnterminatedCode)?),
        };
        pos += instr.width();
        match instr {
            Instr::Open => depth += 1,
            Instr::Close => {
                depth = depth.checked_sub(1).ok_or(InvalidReason::UnmatchedBracket)?;
            }
            Instr::End if depth > 0 => return Err(InvalidReason::UnmatchedBracket),
            Instr::End => return Ok(pos),
            _ => {}
        }
    }
}

/// Runs one description to completion or until the budget is spent.
pub fn run(
    description: &BitString,
    mode: MachineMode,
    condition: &BitString,
    coins: Coins<'_>,
    budget: RunBudget,
) -> RunOutcome {
    let cond = Arc::new(condition.clone());
    let mut generator = None;
    let mut m = match mode {
        MachineMode::Plain => {
            let code_len = match code_segment_len(description) {
                Ok(n) => n,
                Err(reason) => return RunOutcome::Invalid { reason },
            };
            Machine::new(
                mode,
                Stream::closed(description.prefix(code_len)),
                Stream::closed(description.slice(code_len, description.len())),
                cond,
            )
        }
        MachineMode::Coin => {
            let code_len = match code_segment_len(description) {
                Ok(n) => n,
                Err(reason) => return RunOutcome::Invalid { reason },
            };
            if code_len != description.len() {
                return RunOutcome::Invalid {
                    reason: InvalidReason::TrailingBits,
                };
            }
            let data = match coins {
                Coins::None => Stream::closed(BitString::new()),
                Coins::Bits(b) => Stream::closed(b.clone()),
                Coins::Generator(g) => {
                    generator = Some(g);
                    Stream::open()
                }
            };
            Machine::new(mode, Stream::closed(description.clone()), data, cond)
        }
        MachineMode::Prefix => Machine::new(
            mode,
            Stream::closed(description.clone()),
            Stream::closed(BitString::new()),
            cond,
        ),
    };
    loop {
        match m.step(budget.max_steps) {
            Event::Continue => {}
            Event::Need(src) => match generator.as_mut() {
                Some(g) => m.supply(src, g()),
                None => unreachable!("closed streams never starve"),
            },
            Event::NeedInstr => unreachable!("the description stream is closed"),
            Event::Halt(_) => {
                // The code segment is parsed statically, so all of it counts
                // even when the machine halts before reaching END.
                let consumed = match mode {
                    MachineMode::Plain => m.desc.bits.len() + m.data.pos,
                    MachineMode::Coin => m.desc.bits.len(),
                    MachineMode::Prefix => m.consumed(),
                };
                if mode == MachineMode::Prefix && consumed != description.len() {
                    return RunOutcome::Invalid {
                        reason: InvalidReason::InexactConsumption,
                    };
                }
                return RunOutcome::Halted {
                    output: m.output,
                    steps: m.steps,
                    consumed,
                };
            }
            Event::Fail(reason) => return RunOutcome::Invalid { reason },
            Event::OutOfBudget => return RunOutcome::BudgetExceeded,
        }
    }
}

/// `run` without condition or coins.
pub fn run_plain(description: &BitString, mode: MachineMode, max_steps: u64) -> RunOutcome {
    run(
        description,
        mode,
        &BitString::new(),
        Coins::None,
        RunBudget::new(max_steps),
    )
}

#[cfg(test)]
mod tests {
    use super::Instr::*;
    use super::*;
    use crate::bitcore::bits;
    use proptest::prelude::*;

    fn halted(output: &str, steps: u64, consumed: usize) -> RunOutcome {
        RunOutcome::Halted {
            output: bits(output),
            steps,
            consumed,
        }
    }

    #[test]
    fn single_end() {
        assert_eq!(run_plain(&bits("1111"), MachineMode::Plain, 10), halted("", 1, 4));
        assert_eq!(run_plain(&bits("1111"), MachineMode::Prefix, 10), halted("", 1, 4));
        assert_eq!(
            run_plain(&bits("11110"), MachineMode::Prefix, 10),
            RunOutcome::Invalid {
                reason: InvalidReason::InexactConsumption
            }
        );
        // Plain mode treats the extra bit as unread data.
        assert_eq!(run_plain(&bits("11110"), MachineMode::Plain, 10), halted("", 1, 4));
    }

    #[test]
    fn literal_copier_trace() {
        // FLIP OPEN, then per data bit RIGHT READD OUT LEFT CLOSE, then RIGHT
        // and a READD that finds the data exhausted.
        let d = literal_program(&bits("101"));
        assert_eq!(d, bits("0101000011100110001011111101"));
        assert_eq!(run_plain(&d, MachineMode::Plain, 100), halted("101", 19, 28));
        assert_eq!(run_plain(&d, MachineMode::Plain, 18), RunOutcome::BudgetExceeded);
    }

    #[test]
    fn invalid_descriptions() {
        let inv = |r| RunOutcome::Invalid { reason: r };
        assert_eq!(run_plain(&bits("011"), MachineMode::Plain, 10), inv(InvalidReason::UnterminatedCode));
        assert_eq!(run_plain(&bits("01111"), MachineMode::Plain, 10), inv(InvalidReason::UnterminatedCode));
        assert_eq!(
            run_plain(&assemble(&[Open, End]), MachineMode::Plain, 10),
            inv(InvalidReason::UnmatchedBracket)
        );
        assert_eq!(
            run_plain(&assemble(&[Close, End]), MachineMode::Plain, 10),
            inv(InvalidReason::UnmatchedBracket)
        );
        // Static matching: the unmatched CLOSE is never executed but still invalid.
        assert_eq!(
            run_plain(&assemble(&[Out, End, Close]), MachineMode::Plain, 10),
            halted("0", 2, 7)
        );
        assert_eq!(
            run_plain(&assemble(&[Flip, Open, End, Close, End]), MachineMode::Plain, 10),
            inv(InvalidReason::UnmatchedBracket)
        );
        assert_eq!(run_plain(&bits("011"), MachineMode::Prefix, 10), inv(InvalidReason::NeedsMoreBits));
        // READD takes the first bit of OUT, so the rest decodes as END early.
        assert_eq!(
            run_plain(&assemble(&[ReadData, Out, End]), MachineMode::Prefix, 10),
            inv(InvalidReason::InexactConsumption)
        );
    }

    #[test]
    fn prefix_mode_reads_data_inline() {
        let mut d = assemble(&[ReadData]);
        d.push(true);
        d.extend_from(&assemble(&[Out, End]));
        assert_eq!(run_plain(&d, MachineMode::Prefix, 10), halted("1", 3, 11));
        // OPEN-skip consumes the skipped body without reading data for READD.
        let d = assemble(&[Open, ReadData, Close, Out, End]);
        assert_eq!(run_plain(&d, MachineMode::Prefix, 10), halted("0", 3, 16));
    }

    #[test]
    fn condition_reads() {
        let cond = bits("1101");
        let out = run(&condition_copier(), MachineMode::Plain, &cond, Coins::None, RunBudget::new(100));
        assert_eq!(out, halted("1101", 24, 26));
        // 5 steps per copied bit plus 4.
        let out = run(&condition_copier(), MachineMode::Plain, &cond, Coins::None, RunBudget::new(23));
        assert_eq!(out, RunOutcome::BudgetExceeded);
    }

    #[test]
    fn coin_mode() {
        let code = assemble(&[ReadData, Out, End]);
        let coins = bits("1");
        let out = run(&code, MachineMode::Coin, &BitString::new(), Coins::Bits(&coins), RunBudget::new(10));
        assert_eq!(out, halted("1", 3, 10));
        let out = run(&code, MachineMode::Coin, &BitString::new(), Coins::None, RunBudget::new(10));
        assert_eq!(out, RunOutcome::Invalid { reason: InvalidReason::CoinsExhausted });
        let mut trailing = code.clone();
        trailing.push(false);
        let out = run(&trailing, MachineMode::Coin, &BitString::new(), Coins::None, RunBudget::new(10));
        assert_eq!(out, RunOutcome::Invalid { reason: InvalidReason::TrailingBits });
        let mut n = 0;
        let mut gen = || {
            n += 1;
            n % 2 == 0
        };
        let loop_code = assemble(&[Flip, Open, ReadData, Out, Close, End]);
        let out = run(&loop_code, MachineMode::Coin, &BitString::new(), Coins::Generator(&mut gen), RunBudget::new(100));
        assert_eq!(out, halted("0", 6, 19));
    }

    fn arb_bits(max: usize) -> impl Strategy<Value = BitString> {
        prop::collection::vec(any::<bool>(), 0..max).prop_map(BitString::from)
    }

    proptest! {
        #[test]
        fn literal_bound(x in arb_bits(65)) {
            let d = literal_program(&x);
            prop_assert_eq!(d.len(), x.len() + LITERAL_OVERHEAD);
            let steps = 5 * x.len() as u64 + 4;
            prop_assert_eq!(run_plain(&d, MachineMode::Plain, steps), halted(&x.to_string(), steps, d.len()));
        }

        #[test]
        fn runs_are_deterministic(d in arb_bits(40), mode in prop_oneof![Just(MachineMode::Plain), Just(MachineMode::Prefix)]) {
            let a = run_plain(&d, mode, 200);
            let b = run_plain(&d, mode, 200);
            prop_assert_eq!(&a, &b);
            if let RunOutcome::Halted { steps, consumed, .. } = a {
                prop_assert!(steps <= 200);
                if mode == MachineMode::Prefix {
                    prop_assert_eq!(consumed, d.len());
                }
            }
        }
    }
}
