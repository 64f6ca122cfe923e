use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// An exact non-negative rational `numerator / 2^exponent`, kept normalized
/// (odd numerator unless zero, in which case the exponent is zero).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigUint,
    exp: u32,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            num: BigUint::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            num: BigUint::one(),
            exp: 0,
        }
    }

    pub fn new(num: impl Into<BigUint>, exp: u32) -> Self {
        let mut d = Dyadic {
            num: num.into(),
            exp,
        };
        d.normalize();
        d
    }

    /// `2^-k`, the measure of a cylinder of a length-`k` string.
    pub fn pow2_neg(k: u32) -> Self {
        Dyadic {
            num: BigUint::one(),
            exp: k,
        }
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0).min(u64::from(self.exp)) as u32;
        if tz > 0 {
            self.num >>= tz;
            self.exp -= tz;
        }
    }

    /// `self / 2^k`
    pub fn div_pow2(&self, k: u32) -> Dyadic {
        Dyadic::new(self.num.clone(), self.exp + k)
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Numerator when the value is written over the common denominator `2^exp`.
    fn scaled(&self, exp: u32) -> BigUint {
        debug_assert!(exp >= self.exp);
        &self.num << (exp - self.exp)
    }

    /// Exact difference, `None` when it would be negative.
    pub fn checked_sub(&self, other: &Dyadic) -> Option<Dyadic> {
        let e = self.exp.max(other.exp);
        let (a, b) = (self.scaled(e), other.scaled(e));
        if a < b {
            None
        } else {
            Some(Dyadic::new(a - b, e))
        }
    }

    pub fn to_f64(&self) -> f64 {
        let n = self.num.to_f64().unwrap_or(f64::INFINITY);
        n * (-(f64::from(self.exp))).exp2()
    }

    /// `-log2(self)`, or infinity for zero.
    pub fn neg_log2(&self) -> f64 {
        if self.is_zero() {
            return f64::INFINITY;
        }
        let bits = self.num.bits();
        // Shift the numerator into f64 range before taking the log.
        let shift = bits.saturating_sub(60);
        let top = (&self.num >> shift).to_f64().unwrap();
        f64::from(self.exp) - top.log2() - shift as f64
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(
            self.num.clone().into(),
            (BigUint::one() << self.exp).into(),
        )
    }

    /// Number of cylinders of length `depth` this mass covers, when it is a
    /// multiple of `2^-depth`.
    pub fn count_at_depth(&self, depth: u32) -> Option<BigUint> {
        (depth >= self.exp).then(|| self.scaled(depth))
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.max(other.exp);
        self.scaled(e).cmp(&other.scaled(e))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<&Dyadic> for &Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exp.max(rhs.exp);
        Dyadic::new(self.scaled(e) + rhs.scaled(e), e)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = &*self + rhs;
    }
}

impl AddAssign for Dyadic {
    fn add_assign(&mut self, rhs: Dyadic) {
        *self = &*self + &rhs;
    }
}

impl Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::zero(), |acc, d| acc + d)
    }
}

impl<'a> Sum<&'a Dyadic> for Dyadic {
    fn sum<I: Iterator<Item = &'a Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::zero(), |acc, d| &acc + d)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({self})")
    }
}

/// Serialized as `{num, exp}`; `num` is a JSON number when it fits in 64 bits
/// and a decimal string otherwise.
impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Dyadic", 2)?;
        match self.num.to_u64() {
            Some(n) => st.serialize_field("num", &n)?,
            None => st.serialize_field("num", &self.num.to_string())?,
        }
        st.serialize_field("exp", &self.exp)?;
        st.end()
    }
}
