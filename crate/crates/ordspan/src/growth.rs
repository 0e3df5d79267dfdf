//! Growth polynomials built from new-radical-free counts, their sign at the
//! base, largest-real-root isolation, and the string-count bounds.
//!
//! P(x) = x^m - sum_{i=1..m} c_i * x^(m-i). The coefficient row has one
//! sign change, so P has exactly one positive root g, with P < 0 left of g
//! and P > 0 right of it; P(b) < 0 therefore certifies g > b. Verdicts rely
//! only on the exact integer sign of P(b); the root enclosure is a
//! cross-check and never part of the decision path.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::numeric::ExactValue;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrowthError {
    #[error("counts must be nonempty")]
    EmptyCounts,
    #[error("counts must not be all zero")]
    AllZero,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthPolynomial {
    coeffs: Vec<u64>,
}

impl GrowthPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coeffs
    }

    /// Exact big-integer value of P at an integer point.
    pub fn evaluate(&self, x: &BigInt) -> BigInt {
        let m = self.coeffs.len() as u32;
        let mut value = x.pow(m);
        for (i, &c) in self.coeffs.iter().enumerate() {
            value -= BigInt::from(c) * x.pow(m - 1 - i as u32);
        }
        value
    }

    /// Sign of P(num/den) for den > 0, via den^m * P(num/den), all integer.
    fn sign_at(&self, num: &BigInt, den: &BigInt) -> std::cmp::Ordering {
        debug_assert!(den.is_positive());
        let m = self.coeffs.len() as u32;
        let mut value = num.pow(m);
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = (i + 1) as u32;
            value -= BigInt::from(c) * num.pow(m - k) * den.pow(k);
        }
        value.cmp(&BigInt::zero())
    }

    pub fn to_text(&self) -> String {
        let m = self.coeffs.len();
        let mut out = power_term(m);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let p = m - 1 - i;
            out.push_str(" - ");
            if c != 1 || p == 0 {
                out.push_str(&c.to_string());
            }
            if c != 1 && p > 0 {
                out.push('*');
            }
            if p > 0 {
                out.push_str(&power_term(p));
            }
        }
        out
    }
}

fn power_term(p: usize) -> String {
    match p {
        1 => "x".to_string(),
        _ => format!("x^{p}"),
    }
}

/// Builds P from the per-offset new-radical-free counts.
pub fn build_polynomial(counts: &[u64]) -> Result<GrowthPolynomial, GrowthError> {
    if counts.is_empty() {
        return Err(GrowthError::EmptyCounts);
    }
    if counts.iter().all(|&c| c == 0) {
        return Err(GrowthError::AllZero);
    }
    Ok(GrowthPolynomial {
        coeffs: counts.to_vec(),
    })
}

/// Bisection enclosure `[lo, hi]` of the unique positive root, with
/// `hi - lo <= precision`. Exact integer roots collapse to `[g, g]`.
pub fn largest_real_root(
    p: &GrowthPolynomial,
    precision: &ExactValue,
) -> (ExactValue, ExactValue) {
    assert!(precision.is_positive(), "precision must be > 0");
    let upper: u64 = 1 + p.coefficients().iter().sum::<u64>();
    // first integer with P > 0; P(1) <= 0 because the coefficient sum is >= 1
    let mut lo_int = BigInt::one();
    let mut hi_int = BigInt::from(upper);
    while &lo_int < &hi_int {
        let mid: BigInt = (&lo_int + &hi_int) / 2;
        if p.evaluate(&mid).is_positive() {
            hi_int = mid;
        } else {
            lo_int = mid + 1;
        }
    }
    let below = &lo_int - 1;
    if p.evaluate(&below).is_zero() {
        let exact = ExactValue::integer(below);
        return (exact.clone(), exact);
    }
    let mut lo = ExactValue::integer(below);
    let mut hi = ExactValue::integer(lo_int);
    loop {
        let width = hi.sub(&lo);
        if width.cmp_value(precision) != std::cmp::Ordering::Greater {
            return (lo, hi);
        }
        let mid = lo.add(&hi).half();
        match p.sign_at(mid.numerator(), mid.denominator()) {
            std::cmp::Ordering::Equal => return (mid.clone(), mid),
            std::cmp::Ordering::Less => lo = mid,
            std::cmp::Ordering::Greater => hi = mid,
        }
    }
}

/// Exact Catalan number C(k).
pub fn catalan(k: u64) -> BigInt {
    let mut c = BigInt::one();
    for n in 0..k {
        c = c * 2 * (2 * BigInt::from(n) + 1) / (BigInt::from(n) + 2);
    }
    c
}

/// Counting bounds on expression strings over l digits: the fine bound
/// 2 * 7^(l-1) * C(l-1) and the coarse bound 28^l.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringCountBound {
    pub fine: BigInt,
    pub coarse: BigInt,
}

pub fn expression_string_bound(l: u64) -> StringCountBound {
    assert!(l >= 1);
    let fine = BigInt::from(2) * BigInt::from(7).pow((l - 1) as u32) * catalan(l - 1);
    let coarse = BigInt::from(28).pow(l as u32);
    StringCountBound { fine, coarse }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conclusion {
    DensityOneCriterionMet,
    NotEstablished,
}

impl Conclusion {
    pub fn as_str(self) -> &'static str {
        match self {
            Conclusion::DensityOneCriterionMet => "density-one-criterion-met",
            Conclusion::NotEstablished => "not-established",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityVerdict {
    pub base: u8,
    pub counts: Vec<u64>,
    pub polynomial: GrowthPolynomial,
    pub value_at_base: BigInt,
    pub root_lo: ExactValue,
    pub root_hi: ExactValue,
    pub conclusion: Conclusion,
}

/// Assembles the polynomial, its exact value at the base, a root enclosure
/// refined until it is decisive against the base, and the conclusion.
pub fn density_verdict(counts: &[u64], base: u8) -> Result<DensityVerdict, GrowthError> {
    let polynomial = build_polynomial(counts)?;
    let value_at_base = polynomial.evaluate(&BigInt::from(base));
    let conclusion = if value_at_base.is_negative() {
        Conclusion::DensityOneCriterionMet
    } else {
        Conclusion::NotEstablished
    };
    let base_value = ExactValue::integer(base);
    let mut precision = crate::numeric::make_rational(1, 1024).expect("static");
    let (mut lo, mut hi) = largest_real_root(&polynomial, &precision);
    // refine until the enclosure sits strictly on one side of the base
    // (or pins the root exactly on it)
    for _ in 0..128 {
        let decisive = lo.cmp_value(&base_value) == std::cmp::Ordering::Greater
            || hi.cmp_value(&base_value) == std::cmp::Ordering::Less
            || lo == hi;
        if decisive {
            break;
        }
        precision = precision.half();
        let refined = largest_real_root(&polynomial, &precision);
        lo = refined.0;
        hi = refined.1;
    }
    Ok(DensityVerdict {
        base,
        counts: counts.to_vec(),
        polynomial,
        value_at_base,
        root_lo: lo,
        root_hi: hi,
        conclusion,
    })
}
