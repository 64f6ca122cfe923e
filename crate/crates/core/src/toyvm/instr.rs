use std::fmt;

use crate::bitcore::BitString;

/// One TBF-1 instruction.
///
/// Encoding: `000` LEFT, `001` RIGHT, `010` FLIP, `011` OUT, `100` OPEN,
/// `101` CLOSE, `110` READD, `1110` READC, `1111` END.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Instr {
    Left,
    Right,
    Flip,
    Out,
    Open,
    Close,
    ReadData,
    ReadCond,
    End,
}

impl Instr {
    pub const ALL: [Instr; 9] = [
        Instr::Left,
        Instr::Right,
        Instr::Flip,
        Instr::Out,
        Instr::Open,
        Instr::Close,
        Instr::ReadData,
        Instr::ReadCond,
        Instr::End,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Instr::Left => "000",
            Instr::Right => "001",
            Instr::Flip => "010",
            Instr::Out => "011",
            Instr::Open => "100",
            Instr::Close => "101",
            Instr::ReadData => "110",
            Instr::ReadCond => "1110",
            Instr::End => "1111",
        }
    }

    pub fn width(self) -> usize {
        self.code().len()
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            Instr::Left => "LEFT",
            Instr::Right => "RIGHT",
            Instr::Flip => "FLIP",
            Instr::Out => "OUT",
            Instr::Open => "OPEN",
            Instr::Close => "CLOSE",
            Instr::ReadData => "READD",
            Instr::ReadCond => "READC",
            Instr::End => "END",
        }
    }

    pub fn encode_into(self, out: &mut BitString) {
        for c in self.code().bytes() {
            out.push(c == b'1');
        }
    }

    /// Decodes from the first three bits, or `None` when the prefix is `111`
    /// and a fourth bit is needed.
    pub(crate) fn from_triple(b0: bool, b1: bool, b2: bool) -> Option<Instr> {
        Some(match (b0, b1, b2) {
            (false, false, false) => Instr::Left,
            (false, false, true) => Instr::Right,
            (false, true, false) => Instr::Flip,
            (false, true, true) => Instr::Out,
            (true, false, false) => Instr::Open,
            (true, false, true) => Instr::Close,
            (true, true, false) => Instr::ReadData,
            (true, true, true) => return None,
        })
    }

    pub(crate) fn from_long(b3: bool) -> Instr {
        if b3 {
            Instr::End
        } else {
            Instr::ReadCond
        }
    }
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

/// Concatenates instruction encodings.
pub fn assemble(program: &[Instr]) -> BitString {
    let mut out = BitString::new();
    for &i in program {
        i.encode_into(&mut out);
    }
    out
}

/// The literal copier `FLIP [ RIGHT READD OUT LEFT ] END` followed by `x` as
/// data. Its code segment is 25 bits.
pub fn literal_program(x: &BitString) -> BitString {
    use Instr::*;
    let mut d = assemble(&[Flip, Open, Right, ReadData, Out, Left, Close, End]);
    d.extend_from(x);
    d
}

/// `FLIP [ RIGHT READC OUT LEFT ] END`: copies the condition to the output.
pub fn condition_copier() -> BitString {
    use Instr::*;
    assemble(&[Flip, Open, Right, ReadCond, Out, Left, Close, End])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encodings_form_a_prefix_code() {
        for a in Instr::ALL {
            for b in Instr::ALL {
                if a != b {
                    assert!(!b.code().starts_with(a.code()), "{a} prefixes {b}");
                }
            }
        }
        let kraft: f64 = Instr::ALL.iter().map(|i| (-(i.width() as f64)).exp2()).sum();
        assert_eq!(kraft, 1.0);
    }

    #[test]
    fn copier_sizes() {
        assert_eq!(literal_program(&BitString::new()).len(), 25);
        assert_eq!(condition_copier().len(), 26);
    }
}
