//! Brute-force reference enumerator, deliberately separate from the library:
//! recursion without memoization, arithmetic through num-rational, and its
//! own cap bookkeeping. Only the value sets are comparable; witnesses are
//! out of scope here.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub const MAX_VALUE_BITS: u64 = 256;
pub const MAX_EXPONENT_MAGNITUDE: u64 = 64;

fn fits(v: &BigRational) -> bool {
    v.numer().magnitude().bits() <= MAX_VALUE_BITS
        && v.denom().magnitude().bits() <= MAX_VALUE_BITS
}

fn pow_rational(base: &BigRational, exp: &BigRational, negate: bool) -> Option<BigRational> {
    if !exp.is_integer() {
        return None;
    }
    let mut e = exp.numer().clone();
    if negate {
        e = -e;
    }
    if e.magnitude().bits() > 64 || e.magnitude() > &num_bigint::BigUint::from(MAX_EXPONENT_MAGNITUDE)
    {
        return None;
    }
    let e = e.to_i64()?;
    if base.is_zero() {
        return if e > 0 { Some(BigRational::zero()) } else { None };
    }
    if e == 0 {
        return Some(BigRational::one());
    }
    let m = e.unsigned_abs() as u32;
    let num = base.numer().pow(m);
    let den = base.denom().pow(m);
    let v = if e > 0 {
        BigRational::new(num, den)
    } else {
        BigRational::new(den, num)
    };
    fits(&v).then_some(v)
}

fn apply(op: u8, a: &BigRational, b: &BigRational) -> Option<BigRational> {
    let v = match op {
        0 => a + b,
        1 => a - b,
        2 => a * b,
        3 => {
            if b.is_zero() {
                return None;
            }
            a / b
        }
        4 => return pow_rational(a, b, false),
        5 => return pow_rational(a, b, true),
        _ => unreachable!(),
    };
    fits(&v).then_some(v)
}

fn atom(digits: &[u8], base: u8, allow_leading_zero: bool) -> Option<BigRational> {
    if digits[0] == 0 && digits.len() > 1 && !allow_leading_zero {
        return None;
    }
    let mut v = BigInt::zero();
    for &d in digits {
        v = v * base + d;
    }
    Some(BigRational::from_integer(v))
}

/// Every value computable from the digit slice with digit order kept:
/// the atom itself plus all splits, all six binary operations, and closure
/// under sign flips. No sharing across calls; cost is exponential in length.
pub fn naive_span(digits: &[u8], base: u8, allow_leading_zero: bool) -> BTreeSet<BigRational> {
    let mut out = BTreeSet::new();
    if let Some(a) = atom(digits, base, allow_leading_zero) {
        out.insert(a);
    }
    for split in 1..digits.len() {
        let left = naive_span(&digits[..split], base, allow_leading_zero);
        let right = naive_span(&digits[split..], base, allow_leading_zero);
        for a in &left {
            for b in &right {
                for op in 0..6u8 {
                    if let Some(v) = apply(op, a, b) {
                        out.insert(v);
                    }
                }
            }
        }
    }
    let negated: Vec<BigRational> = out.iter().map(|v| -v).collect();
    out.extend(negated);
    out
}

/// Perfect-power test by direct root extraction, independent of the library.
pub fn is_perfect_power_u64(n: u64) -> bool {
    if n < 2 {
        return n == 1;
    }
    for k in 2..=n.ilog2() {
        let mut root = (n as f64).powf(1.0 / k as f64).round() as u64;
        while root.checked_pow(k).map_or(true, |p| p > n) {
            root -= 1;
        }
        while root
            .checked_add(1)
            .and_then(|r| r.checked_pow(k))
            .is_some_and(|p| p <= n)
        {
            root += 1;
        }
        if root.pow(k) == n {
            return true;
        }
    }
    false
}
