//! Demand-driven TBF-1 interpreter shared by `run` and the enumerators.
//!
//! The machine never sees bits it has not asked for. When an instruction
//! fetch or a READD needs a bit that has not been supplied yet, `step`
//! returns [`Event::Need`] without changing any observable state, so a search
//! can clone the machine and supply each possible bit.

use std::sync::Arc;

use super::{Instr, InvalidReason, MachineMode};
use crate::bitcore::BitString;

const UNKNOWN: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Source {
    /// The description stream: the code segment in Plain and Coin mode,
    /// the whole description in Prefix mode.
    Description,
    /// Plain-mode data segment or the Coin-mode coin stream.
    Data,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HaltCause {
    End,
    DataExhausted,
    ConditionExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Event {
    Continue,
    Need(Source),
    /// The next instruction of an open description stream is unknown.
    NeedInstr,
    Halt(HaltCause),
    Fail(InvalidReason),
    OutOfBudget,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub(crate) struct Stream {
    pub bits: BitString,
    pub pos: usize,
    pub closed: bool,
}

impl Stream {
    pub fn closed(bits: BitString) -> Self {
        Stream {
            bits,
            pos: 0,
            closed: true,
        }
    }

    pub fn open() -> Self {
        Stream::default()
    }
}

/// Work tape: binary cells, unbounded both ways, all zero initially.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Tape {
    cells: Vec<bool>,
    head: usize,
}

impl Default for Tape {
    fn default() -> Self {
        Tape {
            cells: vec![false],
            head: 0,
        }
    }
}

impl Tape {
    fn left(&mut self) {
        if self.head == 0 {
            self.cells.insert(0, false);
        } else {
            self.head -= 1;
        }
    }

    fn right(&mut self) {
        self.head += 1;
        if self.head == self.cells.len() {
            self.cells.push(false);
        }
    }

    fn get(&self) -> bool {
        self.cells[self.head]
    }

    fn set(&mut self, b: bool) {
        self.cells[self.head] = b;
    }

    /// Canonical form: trimmed of blank margins, head relative to the first
    /// kept cell.
    pub fn normalized(&self) -> (Vec<bool>, isize) {
        let first = self.cells.iter().position(|&c| c);
        match first {
            None => (Vec::new(), 0),
            Some(lo) => {
                let hi = self.cells.iter().rposition(|&c| c).unwrap();
                (
                    self.cells[lo..=hi].to_vec(),
                    self.head as isize - lo as isize,
                )
            }
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Machine {
    mode: MachineMode,
    /// Code segment (Plain/Coin) or the whole description (Prefix).
    pub desc: Stream,
    /// Data segment (Plain) or coins (Coin); unused in Prefix mode.
    pub data: Stream,
    cond: Arc<BitString>,
    cond_pos: usize,
    prog: Vec<Instr>,
    partner: Vec<usize>,
    open: Vec<usize>,
    skipping: Option<usize>,
    code_done: bool,
    pc: usize,
    tape: Tape,
    pub output: BitString,
    pub steps: u64,
}

impl Machine {
    pub fn new(mode: MachineMode, desc: Stream, data: Stream, cond: Arc<BitString>) -> Self {
        Machine {
            mode,
            desc,
            data,
            cond,
            cond_pos: 0,
            prog: Vec::new(),
            partner: Vec::new(),
            open: Vec::new(),
            skipping: None,
            code_done: false,
            pc: 0,
            tape: Tape::default(),
            output: BitString::new(),
            steps: 0,
        }
    }

    fn interleaved(&self) -> bool {
        self.mode == MachineMode::Prefix
    }

    /// Whether the code segment is complete (END fetched). Always false in
    /// Prefix mode, where there is no separate code segment.
    pub fn code_done(&self) -> bool {
        self.code_done
    }

    pub fn open_brackets(&self) -> usize {
        self.open.len()
    }

    /// Bits consumed so far: description bits read (code plus, in Plain mode,
    /// data bits read). Coins are not counted.
    pub fn consumed(&self) -> usize {
        match self.mode {
            MachineMode::Plain => self.desc.pos + self.data.pos,
            MachineMode::Prefix | MachineMode::Coin => self.desc.pos,
        }
    }

    /// Lower bound on the total description length of any halting
    /// continuation of this machine.
    pub fn min_final_len(&self) -> usize {
        let mut code = self.desc.bits.len();
        if !self.interleaved() && !self.code_done {
            code = code.max(self.desc.pos + 3 * self.open.len() + 4);
        }
        match self.mode {
            MachineMode::Plain => code + self.data.bits.len(),
            _ => code,
        }
    }

    pub fn supply(&mut self, src: Source, bit: bool) {
        match src {
            Source::Description => self.desc.bits.push(bit),
            Source::Data => self.data.bits.push(bit),
        }
    }

    /// Supplies a whole instruction to an open description stream and
    /// decodes it at once.
    pub fn supply_instr(&mut self, instr: Instr) -> Result<(), InvalidReason> {
        instr.encode_into(&mut self.desc.bits);
        match self.fetch() {
            Ok(()) => Ok(()),
            Err(Event::Fail(r)) => Err(r),
            Err(e) => unreachable!("fetch after supply: {e:?}"),
        }
    }

    pub fn last_instr(&self) -> Option<Instr> {
        self.prog.last().copied()
    }

    pub fn close(&mut self, src: Source) {
        match src {
            Source::Description => self.desc.closed = true,
            Source::Data => self.data.closed = true,
        }
    }

    /// Key for memoizing runs whose future depends only on the machine
    /// configuration (used by coin-tree exploration).
    pub fn config_key(&self, with_output: bool) -> ConfigKey {
        let (cells, head) = self.tape.normalized();
        ConfigKey {
            pc: self.pc,
            skipping: self.skipping,
            tape: cells,
            head,
            cond_pos: self.cond_pos,
            output: with_output.then(|| self.output.clone()),
        }
    }

    fn starve(&self, src: Source) -> Event {
        let stream = match src {
            Source::Description => &self.desc,
            Source::Data => &self.data,
        };
        if !stream.closed {
            return Event::Need(src);
        }
        match (src, self.mode) {
            (Source::Description, MachineMode::Prefix) => Event::Fail(InvalidReason::NeedsMoreBits),
            (Source::Description, _) => Event::Fail(InvalidReason::UnterminatedCode),
            (Source::Data, MachineMode::Prefix) => Event::Fail(InvalidReason::NeedsMoreBits),
            (Source::Data, MachineMode::Plain) => Event::Halt(HaltCause::DataExhausted),
            (Source::Data, MachineMode::Coin) => Event::Fail(InvalidReason::CoinsExhausted),
        }
    }

    /// Decodes and records the next instruction of the description stream.
    fn fetch(&mut self) -> Result<(), Event> {
        let s = &self.desc;
        let bit = |i: usize| s.bits.get(s.pos + i);
        let (b0, b1, b2) = match (bit(0), bit(1), bit(2)) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ if !s.closed && s.bits.len() == s.pos => return Err(Event::NeedInstr),
            _ => return Err(self.starve(Source::Description)),
        };
        let (instr, width) = match Instr::from_triple(b0, b1, b2) {
            Some(i) => (i, 3),
            None => match bit(3) {
                Some(b3) => (Instr::from_long(b3), 4),
                None => return Err(self.starve(Source::Description)),
            },
        };
        let idx = self.prog.len();
        match instr {
            Instr::Open => {
                self.partner.push(UNKNOWN);
                self.open.push(idx);
            }
            Instr::Close => {
                let Some(o) = self.open.pop() else {
                    return Err(Event::Fail(InvalidReason::UnmatchedBracket));
                };
                self.partner[o] = idx;
                self.partner.push(o);
            }
            Instr::End if !self.interleaved() => {
                if !self.open.is_empty() {
                    return Err(Event::Fail(InvalidReason::UnmatchedBracket));
                }
                self.code_done = true;
                self.partner.push(UNKNOWN);
            }
            _ => self.partner.push(UNKNOWN),
        }
        self.prog.push(instr);
        self.desc.pos += width;
        Ok(())
    }

    fn read_data(&mut self) -> Result<bool, Event> {
        let (stream, src) = if self.interleaved() {
            (&mut self.desc, Source::Description)
        } else {
            (&mut self.data, Source::Data)
        };
        match stream.bits.get(stream.pos) {
            Some(b) => {
                stream.pos += 1;
                Ok(b)
            }
            None => Err(self.starve(src)),
        }
    }

    /// Executes one instruction (or one fetch of an OPEN-skip).
    pub fn step(&mut self, max_steps: u64) -> Event {
        if let Some(o) = self.skipping {
            if self.partner[o] != UNKNOWN {
                self.skipping = None;
                self.pc = self.partner[o] + 1;
                return Event::Continue;
            }
            return match self.fetch() {
                Ok(()) => Event::Continue,
                Err(e) => e,
            };
        }
        if self.steps >= max_steps {
            return Event::OutOfBudget;
        }
        if self.pc == self.prog.len() {
            if let Err(e) = self.fetch() {
                return e;
            }
        }
        let pc = self.pc;
        match self.prog[pc] {
            Instr::Left => {
                self.tape.left();
                self.pc += 1;
            }
            Instr::Right => {
                self.tape.right();
                self.pc += 1;
            }
            Instr::Flip => {
                let c = self.tape.get();
                self.tape.set(!c);
                self.pc += 1;
            }
            Instr::Out => {
                self.output.push(self.tape.get());
                self.pc += 1;
            }
            Instr::Open => {
                if self.tape.get() {
                    self.pc += 1;
                } else if self.partner[pc] != UNKNOWN {
                    self.pc = self.partner[pc] + 1;
                } else {
                    self.skipping = Some(pc);
                }
            }
            Instr::Close => {
                if self.tape.get() {
                    self.pc = self.partner[pc] + 1;
                } else {
                    self.pc += 1;
                }
            }
            Instr::ReadData => match self.read_data() {
                Ok(b) => {
                    self.tape.set(b);
                    self.pc += 1;
                }
                Err(Event::Halt(cause)) => {
                    self.steps += 1;
                    return Event::Halt(cause);
                }
                Err(e) => return e,
            },
            Instr::ReadCond => match self.cond.get(self.cond_pos) {
                Some(b) => {
                    self.cond_pos += 1;
                    self.tape.set(b);
                    self.pc += 1;
                }
                None => {
                    self.steps += 1;
                    return Event::Halt(HaltCause::ConditionExhausted);
                }
            },
            Instr::End => {
                self.steps += 1;
                return Event::Halt(HaltCause::End);
            }
        }
        self.steps += 1;
        Event::Continue
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct ConfigKey {
    pc: usize,
    skipping: Option<usize>,
    tape: Vec<bool>,
    head: isize,
    cond_pos: usize,
    output: Option<BitString>,
}
