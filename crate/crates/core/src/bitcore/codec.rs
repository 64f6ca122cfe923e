//! Self-delimiting encodings and the pairing codec.
//!
//! A pair `(x, y)` is written as `dbl(bin(|x|)) 01 x y`: the length of `x`
//! with every bit doubled, the delimiter `01`, then both strings verbatim.
//! Doubled bits never form `01` at an even offset, so the delimiter is found
//! unambiguously.

use super::{BitString, BitsError};

/// Emits every bit twice.
pub fn dbl_encode(x: &BitString) -> BitString {
    let mut out = BitString::with_capacity(2 * x.len());
    for b in x.iter() {
        out.push(b);
        out.push(b);
    }
    out
}

/// `dbl(bin(n)) ++ "01"`.
pub fn selfdelim_number(n: u64) -> BitString {
    let mut out = dbl_encode(&BitString::from_number(n));
    out.push(false);
    out.push(true);
    out
}

/// Reads a self-delimited number from the front of `d`, returning the
/// number and the count of bits it occupied.
pub fn read_selfdelim_number(d: &BitString) -> Result<(u64, usize), BitsError> {
    let mut value = BitString::new();
    let mut pos = 0;
    loop {
        let (a, b) = match (d.get(pos), d.get(pos + 1)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(malformed("no 01 delimiter at an even offset")),
        };
        pos += 2;
        match (a, b) {
            (false, true) => break,
            (true, false) => return Err(malformed("doubled region has an unequal bit pair")),
            (bit, _) => value.push(bit),
        }
    }
    if value.is_empty() {
        return Err(malformed("empty length field"));
    }
    if value.len() > 1 && value.get(0) == Some(false) {
        return Err(malformed("length field has leading zeros"));
    }
    let n = value
        .to_number()
        .ok_or_else(|| malformed("length field overflows"))?;
    Ok((n, pos))
}

pub fn pair_encode(x: &BitString, y: &BitString) -> BitString {
    let mut out = selfdelim_number(x.len() as u64);
    out.extend_from(x);
    out.extend_from(y);
    out
}

pub fn pair_decode(d: &BitString) -> Result<(BitString, BitString), BitsError> {
    let (n, pos) = read_selfdelim_number(d)?;
    let rest = d.len() - pos;
    if n > rest as u64 {
        return Err(malformed("length field exceeds remaining bits"));
    }
    let n = n as usize;
    Ok((d.slice(pos, pos + n), d.slice(pos + n, d.len())))
}

fn malformed(reason: &str) -> BitsError {
    BitsError::MalformedPair(reason.to_string())
}
