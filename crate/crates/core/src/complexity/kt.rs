//! Krichevsky–Trofimov order-0 codelength.
//!
//! The sequential probability of `x` depends only on its counts:
//! `P(x) = (2n0-1)!! (2n1-1)!! / (2^n n!)`. The codelength is
//! `ceil(-log2 P) + KT_HEADER_BITS`, evaluated exactly in integers.

use num_bigint::BigUint;
use num_traits::One;

use crate::bitcore::BitString;

pub const KT_HEADER_BITS: u64 = 8;

/// Product of `f(i)` for `i` in `lo..hi`, as a balanced tree so the big
/// multiplications stay balanced.
fn product(lo: u64, hi: u64, f: &impl Fn(u64) -> u64) -> BigUint {
    match hi - lo {
        0 => BigUint::one(),
        1 => BigUint::from(f(lo)),
        n if n <= 16 => (lo..hi).fold(BigUint::one(), |acc, i| acc * f(i)),
        n => {
            let mid = lo + n / 2;
            product(lo, mid, f) * product(mid, hi, f)
        }
    }
}

/// `(2m-1)!!`
fn odd_factorial(m: u64) -> BigUint {
    product(0, m, &|i| 2 * i + 1)
}

/// `ceil(log2(num / den))` for `num >= den > 0`.
fn ceil_log2_ratio(num: &BigUint, den: &BigUint) -> u64 {
    let mut k = num.bits().saturating_sub(den.bits());
    // 2^k * den is now within a factor of 2 of num on either side.
    while (den << k) < *num {
        k += 1;
    }
    while k > 0 && (den << (k - 1)) >= *num {
        k -= 1;
    }
    k
}

/// Exact `ceil(-log2 P_KT(x))` without the header.
pub fn kt_bits(n0: u64, n1: u64) -> u64 {
    let n = n0 + n1;
    // 2^n n! = prod over i of 2(i+1)
    let num = product(0, n, &|i| 2 * (i + 1));
    let den = odd_factorial(n0) * odd_factorial(n1);
    ceil_log2_ratio(&num, &den)
}

pub fn kt_codelength(x: &BitString) -> u64 {
    let n1 = x.count_ones() as u64;
    let n0 = x.len() as u64 - n1;
    kt_bits(n0, n1) + KT_HEADER_BITS
}
