use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::BitsError;

/// A finite sequence of bits.
///
/// Ordering is shortlex: shorter strings come first, equal lengths compare
/// lexicographically. This is the canonical order used for witnesses and
/// enumeration output throughout the crate.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        BitString { bits: Vec::new() }
    }

    pub fn with_capacity(n: usize) -> Self {
        BitString {
            bits: Vec::with_capacity(n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        BitString {
            bits: vec![false; n],
        }
    }

    pub fn ones(n: usize) -> Self {
        BitString { bits: vec![true; n] }
    }

    /// Parses the text form: either plain `0`/`1` characters, or the hex
    /// form `x<hex digits>[:<bit length>]`.
    pub fn parse(s: &str) -> Result<Self, BitsError> {
        if let Some(rest) = s.strip_prefix('x') {
            return Self::parse_hex(rest);
        }
        let mut bits = Vec::with_capacity(s.len());
        for (pos, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => return Err(BitsError::BadChar { pos, found: other }),
            }
        }
        Ok(BitString { bits })
    }

    fn parse_hex(s: &str) -> Result<Self, BitsError> {
        let (digits, len) = match s.split_once(':') {
            Some((d, l)) => {
                let len: usize = l
                    .parse()
                    .map_err(|_| BitsError::BadHex(format!("bad length suffix {l:?}")))?;
                (d, Some(len))
            }
            None => (s, None),
        };
        let mut bits = Vec::with_capacity(digits.len() * 4);
        for c in digits.chars() {
            let v = c
                .to_digit(16)
                .ok_or_else(|| BitsError::BadHex(format!("bad hex digit {c:?}")))?;
            for shift in (0..4).rev() {
                bits.push((v >> shift) & 1 == 1);
            }
        }
        if let Some(len) = len {
            if len > bits.len() || bits.len() - len >= 4 {
                return Err(BitsError::BadHex(format!(
                    "length {len} does not fit {} hex digits",
                    digits.len()
                )));
            }
            bits.truncate(len);
        }
        Ok(BitString { bits })
    }

    /// Hex text form; a `:len` suffix is appended when the length is not a
    /// multiple of four.
    pub fn to_hex(&self) -> String {
        let mut out = String::from("x");
        for chunk in self.bits.chunks(4) {
            let mut v = 0u32;
            for i in 0..4 {
                v = (v << 1) | u32::from(chunk.get(i).copied().unwrap_or(false));
            }
            out.push(char::from_digit(v, 16).unwrap());
        }
        if !self.bits.len().is_multiple_of(4) {
            out.push_str(&format!(":{}", self.bits.len()));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    pub fn push(&mut self, b: bool) {
        self.bits.push(b);
    }

    pub fn pop(&mut self) -> Option<bool> {
        self.bits.pop()
    }

    pub fn truncate(&mut self, n: usize) {
        self.bits.truncate(n);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut out = self.clone();
        out.extend_from(other);
        out
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    pub fn slice(&self, start: usize, end: usize) -> BitString {
        BitString {
            bits: self.bits[start..end].to_vec(),
        }
    }

    pub fn prefix(&self, n: usize) -> BitString {
        self.slice(0, n)
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.bits.starts_with(&self.bits)
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Standard binary notation without leading zeros; `bin(0)` is `"0"`.
    pub fn from_number(mut n: u64) -> BitString {
        if n == 0 {
            return BitString { bits: vec![false] };
        }
        let mut bits = Vec::new();
        while n > 0 {
            bits.push(n & 1 == 1);
            n >>= 1;
        }
        bits.reverse();
        BitString { bits }
    }

    /// Reads the bits as an unsigned binary number (most significant first).
    pub fn to_number(&self) -> Option<u64> {
        if self.bits.len() > 64 {
            let lead = self.bits.len() - 64;
            if self.bits[..lead].iter().any(|&b| b) {
                return None;
            }
        }
        Some(self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b)))
    }
}

impl From<Vec<bool>> for BitString {
    fn from(bits: Vec<bool>) -> Self {
        BitString { bits }
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitString {
            bits: iter.into_iter().collect(),
        }
    }
}

impl FromStr for BitString {
    type Err = BitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BitString::parse(s)
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bits
            .len()
            .cmp(&other.bits.len())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        BitString::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Shorthand for building bit strings from `0`/`1` literals in tests and examples.
///
/// Panics on any other character.
pub fn bits(s: &str) -> BitString {
    BitString::parse(s).expect("bit literal")
}
