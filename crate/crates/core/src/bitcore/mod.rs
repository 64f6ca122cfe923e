//! Bit strings, exact dyadic arithmetic, cylinder covers and the
//! self-delimiting codecs everything else is built on.

mod bits;
mod codec;
mod cover;
mod dyadic;

pub use bits::{bits, BitString};
pub use codec::{
    dbl_encode, pair_decode, pair_encode, read_selfdelim_number, selfdelim_number,
};
pub use cover::{AlphaSize, IntervalCover};
pub use dyadic::Dyadic;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BitsError {
    #[error("invalid bit character {found:?} at position {pos}")]
    BadChar { pos: usize, found: char },
    #[error("invalid hex bit string: {0}")]
    BadHex(String),
    #[error("malformed pair: {0}")]
    MalformedPair(String),
}
