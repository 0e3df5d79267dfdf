//! Exact rational arithmetic with bit-length caps, perfect-power detection,
//! and the radical-free predicate.
//!
//! Every value flowing through the enumeration engines is an [`ExactValue`]:
//! a canonical-form big rational whose numerator and denominator bit lengths
//! stay under the configured [`EvalCaps`]. Operations that would produce an
//! undefined or over-cap result report an [`Exclusion`] instead of a value,
//! so enumeration can skip them silently while callers can still tell a cap
//! hit from a genuinely undefined form.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumericError {
    #[error("denominator must be nonzero")]
    ZeroDenominator,
    #[error("argument must be a positive integer")]
    NonPositiveArgument,
    #[error("invalid caps: {0}")]
    InvalidCaps(String),
}

/// Tractability limits on enumerated values.
///
/// Defaults (256 value bits, exponent magnitude 64) are wide enough that the
/// binary table reproduction and the ternary/quaternary partial counts never
/// lose a needed value; anything discarded is flagged via `cap_hit`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalCaps {
    pub max_value_bits: u32,
    pub max_exponent_magnitude: u32,
}

impl Default for EvalCaps {
    fn default() -> Self {
        EvalCaps {
            max_value_bits: 256,
            max_exponent_magnitude: 64,
        }
    }
}

impl EvalCaps {
    pub fn new(max_value_bits: u32, max_exponent_magnitude: u32) -> Result<Self, NumericError> {
        if max_value_bits == 0 || max_exponent_magnitude == 0 {
            return Err(NumericError::InvalidCaps(
                "caps must be strictly positive".into(),
            ));
        }
        Ok(EvalCaps {
            max_value_bits,
            max_exponent_magnitude,
        })
    }
}

/// A canonical-form rational: `den >= 1`, `gcd(|num|, den) = 1`, sign on the
/// numerator.
///
/// The derived `Ord` compares `(numerator, denominator)` lexicographically,
/// which is the storage order used for deterministic set output. Use
/// [`ExactValue::cmp_value`] for numeric comparison.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactValue {
    num: BigInt,
    den: BigInt,
}

impl ExactValue {
    fn canonical(num: BigInt, den: BigInt) -> ExactValue {
        debug_assert!(!den.is_zero());
        let (mut num, mut den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num, den)
        };
        if num.is_zero() {
            den = BigInt::one();
        } else {
            let g = num.gcd(&den);
            if !g.is_one() {
                num /= &g;
                den /= &g;
            }
        }
        ExactValue { num, den }
    }

    pub fn integer<T: Into<BigInt>>(n: T) -> ExactValue {
        ExactValue {
            num: n.into(),
            den: BigInt::one(),
        }
    }

    pub fn zero() -> ExactValue {
        ExactValue::integer(0)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_integer(&self) -> Option<&BigInt> {
        if self.is_integer() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn neg(&self) -> ExactValue {
        ExactValue {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    /// Numeric-order comparison (as opposed to the storage `Ord`).
    pub fn cmp_value(&self, other: &ExactValue) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }

    pub(crate) fn add(&self, other: &ExactValue) -> ExactValue {
        ExactValue::canonical(
            &self.num * &other.den + &other.num * &self.den,
            &self.den * &other.den,
        )
    }

    pub(crate) fn sub(&self, other: &ExactValue) -> ExactValue {
        ExactValue::canonical(
            &self.num * &other.den - &other.num * &self.den,
            &self.den * &other.den,
        )
    }

    pub(crate) fn half(&self) -> ExactValue {
        ExactValue::canonical(self.num.clone(), &self.den * 2)
    }

    fn within(&self, caps: &EvalCaps) -> bool {
        self.num.magnitude().bits() <= caps.max_value_bits as u64
            && self.den.bits() <= caps.max_value_bits as u64
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// `make_rational(3, 6) == 1/2`; the sign is carried on the numerator.
pub fn make_rational<N: Into<BigInt>, D: Into<BigInt>>(
    num: N,
    den: D,
) -> Result<ExactValue, NumericError> {
    let den = den.into();
    if den.is_zero() {
        return Err(NumericError::ZeroDenominator);
    }
    Ok(ExactValue::canonical(num.into(), den))
}

/// The six normalized binary operations. `PowNeg` computes `lhs^(-rhs)`;
/// it is the extra operation left over once unary negations are pushed to
/// the front of an expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    PowNeg,
}

impl BinaryOp {
    pub const ALL: [BinaryOp; 6] = [
        BinaryOp::Add,
        BinaryOp::Sub,
        BinaryOp::Mul,
        BinaryOp::Div,
        BinaryOp::Pow,
        BinaryOp::PowNeg,
    ];

    pub fn token(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Pow => "^",
            BinaryOp::PowNeg => "^-",
        }
    }
}

/// Why a candidate was dropped rather than produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exclusion {
    DivisionByZero,
    ZeroPowZero,
    ZeroToNegativePower,
    NonIntegerExponent,
    InexactRoot,
    ExponentTooLarge,
    ValueTooWide,
}

impl Exclusion {
    /// Cap-induced exclusions qualify completeness claims; the rest are
    /// genuinely undefined forms.
    pub fn is_cap(self) -> bool {
        matches!(self, Exclusion::ExponentTooLarge | Exclusion::ValueTooWide)
    }

    pub fn describe(self) -> &'static str {
        match self {
            Exclusion::DivisionByZero => "division by zero",
            Exclusion::ZeroPowZero => "0^0",
            Exclusion::ZeroToNegativePower => "zero to a negative power",
            Exclusion::NonIntegerExponent => "non-integer exponent",
            Exclusion::InexactRoot => "rational exponent without an exact result",
            Exclusion::ExponentTooLarge => "exponent magnitude over cap",
            Exclusion::ValueTooWide => "value bit-length over cap",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalOutcome {
    Value(ExactValue),
    Excluded(Exclusion),
}

impl EvalOutcome {
    pub fn value(self) -> Option<ExactValue> {
        match self {
            EvalOutcome::Value(v) => Some(v),
            EvalOutcome::Excluded(_) => None,
        }
    }
}

/// Rational exponents are excluded by default; the `ExactRational` policy
/// admits them only when the result is itself an exact rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExponentPolicy {
    #[default]
    IntegerOnly,
    ExactRational,
}

pub fn apply_binary(
    op: BinaryOp,
    lhs: &ExactValue,
    rhs: &ExactValue,
    caps: &EvalCaps,
) -> EvalOutcome {
    apply_binary_with(op, lhs, rhs, caps, ExponentPolicy::IntegerOnly)
}

pub fn apply_binary_with(
    op: BinaryOp,
    lhs: &ExactValue,
    rhs: &ExactValue,
    caps: &EvalCaps,
    policy: ExponentPolicy,
) -> EvalOutcome {
    let produced = match op {
        BinaryOp::Add => lhs.add(rhs),
        BinaryOp::Sub => lhs.sub(rhs),
        BinaryOp::Mul => {
            ExactValue::canonical(&lhs.num * &rhs.num, &lhs.den * &rhs.den)
        }
        BinaryOp::Div => {
            if rhs.is_zero() {
                return EvalOutcome::Excluded(Exclusion::DivisionByZero);
            }
            ExactValue::canonical(&lhs.num * &rhs.den, &lhs.den * &rhs.num)
        }
        BinaryOp::Pow => return pow(lhs, rhs, false, caps, policy),
        BinaryOp::PowNeg => return pow(lhs, rhs, true, caps, policy),
    };
    if produced.within(caps) {
        EvalOutcome::Value(produced)
    } else {
        EvalOutcome::Excluded(Exclusion::ValueTooWide)
    }
}

fn pow(
    base: &ExactValue,
    exponent: &ExactValue,
    negate_exponent: bool,
    caps: &EvalCaps,
    policy: ExponentPolicy,
) -> EvalOutcome {
    if !exponent.is_integer() {
        return match policy {
            ExponentPolicy::IntegerOnly => {
                EvalOutcome::Excluded(Exclusion::NonIntegerExponent)
            }
            ExponentPolicy::ExactRational => {
                rational_pow(base, exponent, negate_exponent, caps)
            }
        };
    }
    let mut e = exponent.num.clone();
    if negate_exponent {
        e = -e;
    }
    integer_pow(base, &e, caps)
}

fn integer_pow(base: &ExactValue, e: &BigInt, caps: &EvalCaps) -> EvalOutcome {
    if e.magnitude() > &num_bigint::BigUint::from(caps.max_exponent_magnitude) {
        return EvalOutcome::Excluded(Exclusion::ExponentTooLarge);
    }
    let e = e.to_i64().expect("exponent fits i64 under cap");
    if base.is_zero() {
        return match e.cmp(&0) {
            Ordering::Greater => EvalOutcome::Value(ExactValue::zero()),
            Ordering::Equal => EvalOutcome::Excluded(Exclusion::ZeroPowZero),
            Ordering::Less => EvalOutcome::Excluded(Exclusion::ZeroToNegativePower),
        };
    }
    if e == 0 {
        return EvalOutcome::Value(ExactValue::integer(1));
    }
    let m = e.unsigned_abs() as u32;
    // A value of k bits raised to the m-th power has at least m*(k-1)+1 bits,
    // so over-cap results can be rejected before computing them.
    let base_bits = base
        .num
        .magnitude()
        .bits()
        .max(base.den.bits());
    if base_bits > 1 && (base_bits - 1) * m as u64 + 1 > caps.max_value_bits as u64 {
        return EvalOutcome::Excluded(Exclusion::ValueTooWide);
    }
    let num = base.num.pow(m);
    let den = base.den.pow(m);
    let produced = if e > 0 {
        ExactValue::canonical(num, den)
    } else {
        ExactValue::canonical(den, num)
    };
    if produced.within(caps) {
        EvalOutcome::Value(produced)
    } else {
        EvalOutcome::Excluded(Exclusion::ValueTooWide)
    }
}

fn rational_pow(
    base: &ExactValue,
    exponent: &ExactValue,
    negate_exponent: bool,
    caps: &EvalCaps,
) -> EvalOutcome {
    let mut p = exponent.num.clone();
    if negate_exponent {
        p = -p;
    }
    let q = match exponent.den.to_u32() {
        Some(q) => q,
        None => return EvalOutcome::Excluded(Exclusion::ExponentTooLarge),
    };
    if base.is_zero() {
        return if p.is_positive() {
            EvalOutcome::Value(ExactValue::zero())
        } else if p.is_zero() {
            EvalOutcome::Excluded(Exclusion::ZeroPowZero)
        } else {
            EvalOutcome::Excluded(Exclusion::ZeroToNegativePower)
        };
    }
    if base.num.is_negative() && q % 2 == 0 {
        return EvalOutcome::Excluded(Exclusion::InexactRoot);
    }
    let root_num_mag = base.num.magnitude().nth_root(q);
    let root_den = base.den.magnitude().nth_root(q);
    if &root_num_mag.pow(q) != base.num.magnitude() || &root_den.pow(q) != base.den.magnitude() {
        return EvalOutcome::Excluded(Exclusion::InexactRoot);
    }
    let mut root_num = BigInt::from(root_num_mag);
    if base.num.is_negative() {
        root_num = -root_num;
    }
    let root = ExactValue::canonical(root_num, BigInt::from(root_den));
    integer_pow(&root, &p, caps)
}

/// True iff `t = m^k` for integers `m >= 1`, `k >= 2` (so `1 = 1^2` counts).
pub fn is_perfect_power(t: &BigInt) -> Result<bool, NumericError> {
    if !t.is_positive() {
        return Err(NumericError::NonPositiveArgument);
    }
    if t.is_one() {
        return Ok(true);
    }
    let bits = t.bits();
    let mut k: u64 = 2;
    while k <= bits {
        if trial_prime(k) {
            let root = t.nth_root(k as u32);
            if root.pow(k as u32) == *t {
                return Ok(true);
            }
        }
        k += 1;
    }
    Ok(false)
}

fn trial_prime(k: u64) -> bool {
    if k < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= k {
        if k % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The inherited "radical-free" filter applied to span values before
/// counting. The default reproduces every binary table row; the other
/// variants exist to probe the ternary n=2 anomaly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RadicalFreeVariant {
    #[default]
    NotPerfectPower,
    NotPerfectSquare,
    NoFilter,
}

impl RadicalFreeVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            RadicalFreeVariant::NotPerfectPower => "not-perfect-power",
            RadicalFreeVariant::NotPerfectSquare => "not-perfect-square",
            RadicalFreeVariant::NoFilter => "no-filter",
        }
    }

    pub fn parse(text: &str) -> Option<RadicalFreeVariant> {
        match text {
            "not-perfect-power" => Some(RadicalFreeVariant::NotPerfectPower),
            "not-perfect-square" => Some(RadicalFreeVariant::NotPerfectSquare),
            "no-filter" => Some(RadicalFreeVariant::NoFilter),
            _ => None,
        }
    }
}

pub fn radical_free(t: &BigInt, variant: RadicalFreeVariant) -> bool {
    match variant {
        RadicalFreeVariant::NotPerfectPower => {
            t >= &BigInt::from(2) && !is_perfect_power(t).expect("t >= 2")
        }
        RadicalFreeVariant::NotPerfectSquare => {
            if t < &BigInt::from(2) {
                return false;
            }
            let root = t.sqrt();
            &root.pow(2) != t
        }
        RadicalFreeVariant::NoFilter => t.is_positive(),
    }
}

pub fn radical_free_default(t: &BigInt) -> bool {
    radical_free(t, RadicalFreeVariant::NotPerfectPower)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> ExactValue {
        ExactValue::integer(n)
    }

    #[test]
    fn make_rational_reduces() {
        assert_eq!(make_rational(3, 6).unwrap(), make_rational(1, 2).unwrap());
        let v = make_rational(-2, 4).unwrap();
        assert_eq!(v.numerator(), &BigInt::from(-1));
        assert_eq!(v.denominator(), &BigInt::from(2));
        assert_eq!(make_rational(5, 0), Err(NumericError::ZeroDenominator));
        // sign on the numerator even when handed on the denominator
        let v = make_rational(1, -2).unwrap();
        assert_eq!(v.numerator(), &BigInt::from(-1));
    }

    #[test]
    fn canonical_form_is_idempotent() {
        let v = make_rational(-6, 8).unwrap();
        let again = make_rational(v.numerator().clone(), v.denominator().clone()).unwrap();
        assert_eq!(v, again);
    }

    #[test]
    fn binary_op_examples() {
        let caps = EvalCaps::default();
        assert_eq!(
            apply_binary(BinaryOp::Pow, &int(2), &int(7), &caps),
            EvalOutcome::Value(int(128))
        );
        assert_eq!(
            apply_binary(BinaryOp::Pow, &int(0), &int(0), &caps),
            EvalOutcome::Excluded(Exclusion::ZeroPowZero)
        );
        assert_eq!(
            apply_binary(BinaryOp::PowNeg, &int(2), &int(2), &caps),
            EvalOutcome::Value(make_rational(1, 4).unwrap())
        );
        assert_eq!(
            apply_binary(BinaryOp::Div, &int(3), &int(2), &caps),
            EvalOutcome::Value(make_rational(3, 2).unwrap())
        );
        assert_eq!(
            apply_binary(BinaryOp::Div, &int(1), &int(0), &caps),
            EvalOutcome::Excluded(Exclusion::DivisionByZero)
        );
        assert_eq!(
            apply_binary(BinaryOp::Pow, &int(0), &int(-2), &caps),
            EvalOutcome::Excluded(Exclusion::ZeroToNegativePower)
        );
        assert_eq!(
            apply_binary(BinaryOp::Pow, &int(4), &make_rational(1, 2).unwrap(), &caps),
            EvalOutcome::Excluded(Exclusion::NonIntegerExponent)
        );
    }

    #[test]
    fn negative_base_pow() {
        let caps = EvalCaps::default();
        assert_eq!(
            apply_binary(BinaryOp::Pow, &int(-2), &int(3), &caps),
            EvalOutcome::Value(int(-8))
        );
        assert_eq!(
            apply_binary(BinaryOp::Pow, &int(-2), &int(2), &caps),
            EvalOutcome::Value(int(4))
        );
    }

    #[test]
    fn caps_exclude_wide_values() {
        let caps = EvalCaps::new(16, 8).unwrap();
        assert_eq!(
            apply_binary(BinaryOp::Pow, &int(300), &int(3), &caps),
            EvalOutcome::Excluded(Exclusion::ValueTooWide)
        );
        assert_eq!(
            apply_binary(BinaryOp::Pow, &int(2), &int(9), &caps),
            EvalOutcome::Excluded(Exclusion::ExponentTooLarge)
        );
        assert_eq!(
            apply_binary(BinaryOp::Mul, &int(1 << 15), &int(4), &caps),
            EvalOutcome::Excluded(Exclusion::ValueTooWide)
        );
    }

    #[test]
    fn exact_rational_exponents_when_enabled() {
        let caps = EvalCaps::default();
        let half = make_rational(1, 2).unwrap();
        assert_eq!(
            apply_binary_with(BinaryOp::Pow, &int(4), &half, &caps, ExponentPolicy::ExactRational),
            EvalOutcome::Value(int(2))
        );
        assert_eq!(
            apply_binary_with(BinaryOp::Pow, &int(5), &half, &caps, ExponentPolicy::ExactRational),
            EvalOutcome::Excluded(Exclusion::InexactRoot)
        );
        assert_eq!(
            apply_binary_with(BinaryOp::Pow, &int(-27), &make_rational(1, 3).unwrap(), &caps, ExponentPolicy::ExactRational),
            EvalOutcome::Value(int(-3))
        );
    }

    #[test]
    fn perfect_power_examples() {
        assert!(is_perfect_power(&BigInt::from(4)).unwrap());
        assert!(!is_perfect_power(&BigInt::from(7)).unwrap());
        assert!(is_perfect_power(&BigInt::from(27)).unwrap());
        assert!(is_perfect_power(&BigInt::from(1)).unwrap());
        assert!(is_perfect_power(&BigInt::from(64)).unwrap());
        assert_eq!(
            is_perfect_power(&BigInt::from(0)),
            Err(NumericError::NonPositiveArgument)
        );
    }

    #[test]
    fn radical_free_examples() {
        assert!(radical_free_default(&BigInt::from(7)));
        assert!(radical_free_default(&BigInt::from(15)));
        assert!(!radical_free_default(&BigInt::from(4)));
        assert!(!radical_free_default(&BigInt::from(1)));
        assert!(!radical_free_default(&BigInt::from(-7)));
        // variant behavior on the ternary anomaly candidates 4 and 8
        assert!(!radical_free(&BigInt::from(8), RadicalFreeVariant::NotPerfectPower));
        assert!(radical_free(&BigInt::from(8), RadicalFreeVariant::NotPerfectSquare));
        assert!(radical_free(&BigInt::from(1), RadicalFreeVariant::NoFilter));
    }

    #[test]
    fn radical_free_matches_brute_force_small() {
        let limit = 10_000u64;
        let mut power = vec![false; limit as usize + 1];
        for m in 2..=(limit as f64).sqrt() as u64 {
            let mut v = m * m;
            while v <= limit {
                power[v as usize] = true;
                v = v.saturating_mul(m);
            }
        }
        for n in 2..=limit {
            assert_eq!(
                radical_free_default(&BigInt::from(n)),
                !power[n as usize],
                "mismatch at {n}"
            );
        }
    }
}
