//! Nice-Friedman membership decisions, witness emission, and range scans.
//!
//! A positive integer is a nice Friedman number in base b when its own
//! base-b digits, kept in order, compute the number through an expression
//! that uses at least one operation beyond digit concatenation. The general
//! Friedman test (digit order free) is the same decision taken over every
//! distinct permutation of the digit multiset.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;

use crate::expr::OpCounts;
use crate::numeric::{EvalCaps, ExactValue};
use crate::span::{DigitString, Enumerator, SpanConfig, SpanError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessResult {
    pub target: BigInt,
    pub base: u8,
    pub is_nice_friedman: bool,
    pub witness: Option<String>,
    pub ops_used: OpCounts,
    /// When set, a negative result only means "not found within caps".
    pub cap_hit: bool,
}

pub fn is_nice_friedman(
    n: &BigInt,
    base: u8,
    caps: &EvalCaps,
    config: &SpanConfig,
) -> Result<WitnessResult, SpanError> {
    if !n.is_positive() {
        return Err(SpanError::NonPositiveTarget);
    }
    let s = DigitString::of_integer(n, base)?;
    if s.len() > config.max_len {
        return Err(SpanError::TooLong {
            len: s.len(),
            max: config.max_len,
        });
    }
    let mut en = Enumerator::new(base, *caps, *config);
    decide(&mut en, &s, n)
}

fn decide(
    en: &mut Enumerator,
    s: &DigitString,
    target: &BigInt,
) -> Result<WitnessResult, SpanError> {
    let value = ExactValue::integer(target.clone());
    let witness = en.operative_witness(s.digits(), &value);
    let cap_hit = en.span(s.digits()).cap_hit;
    let mut ops_used = OpCounts::default();
    if let Some(w) = &witness {
        w.expr.tally_ops(&mut ops_used);
    }
    Ok(WitnessResult {
        target: target.clone(),
        base: s.base(),
        is_nice_friedman: witness.is_some(),
        witness: witness.map(|w| w.text()),
        ops_used,
        cap_hit,
    })
}

/// General Friedman membership: digit order is free, so every distinct
/// permutation of the digit multiset is tried in lexicographic order and
/// the first witness wins.
pub fn is_friedman_any_order(
    n: &BigInt,
    base: u8,
    caps: &EvalCaps,
    config: &SpanConfig,
) -> Result<WitnessResult, SpanError> {
    if !n.is_positive() {
        return Err(SpanError::NonPositiveTarget);
    }
    let s = DigitString::of_integer(n, base)?;
    if s.len() > config.max_len {
        return Err(SpanError::TooLong {
            len: s.len(),
            max: config.max_len,
        });
    }
    let mut en = Enumerator::new(base, *caps, *config);
    let mut cap_hit = false;
    for digits in distinct_permutations(s.digits()) {
        let perm = DigitString::new(base, digits)?;
        let result = decide(&mut en, &perm, n)?;
        cap_hit |= result.cap_hit;
        if result.is_nice_friedman {
            return Ok(WitnessResult {
                cap_hit,
                ..result
            });
        }
    }
    Ok(WitnessResult {
        target: n.clone(),
        base,
        is_nice_friedman: false,
        witness: None,
        ops_used: OpCounts::default(),
        cap_hit,
    })
}

fn distinct_permutations(digits: &[u8]) -> Vec<Vec<u8>> {
    use itertools::Itertools;
    let set: BTreeSet<Vec<u8>> = digits
        .iter()
        .copied()
        .permutations(digits.len())
        .collect();
    set.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMember {
    pub n: u64,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub base: u8,
    pub limit: u64,
    pub count: u64,
    pub ratio: f64,
    pub members: Vec<DensityMember>,
    pub cap_hit: bool,
}

/// Applies the nice-Friedman test to every integer in [1, limit]. Targets
/// are verified independently (and concurrently); the report is assembled
/// in target order, so the output does not depend on scheduling.
pub fn scan_density(
    base: u8,
    limit: u64,
    caps: &EvalCaps,
    config: &SpanConfig,
) -> Result<DensityReport, SpanError> {
    if limit < 1 {
        return Err(SpanError::NonPositiveTarget);
    }
    if limit > config.max_scan {
        return Err(SpanError::ScanTooLarge {
            limit,
            max: config.max_scan,
        });
    }
    let results: Result<Vec<WitnessResult>, SpanError> = (1..=limit)
        .into_par_iter()
        .map(|n| is_nice_friedman(&BigInt::from(n), base, caps, config))
        .collect();
    let results = results?;
    let cap_hit = results.iter().any(|r| r.cap_hit);
    let members: Vec<DensityMember> = results
        .iter()
        .filter(|r| r.is_nice_friedman)
        .map(|r| DensityMember {
            n: u64::try_from(&r.target).expect("targets fit u64"),
            witness: r.witness.clone().expect("positive results carry witnesses"),
        })
        .collect();
    let count = members.len() as u64;
    Ok(DensityReport {
        base,
        limit,
        count,
        ratio: count as f64 / limit as f64,
        members,
        cap_hit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{eval_witness, parse_witness};

    fn nice(n: i64, base: u8) -> WitnessResult {
        is_nice_friedman(&BigInt::from(n), base, &EvalCaps::default(), &SpanConfig::default())
            .unwrap()
    }

    #[test]
    fn one_two_seven_is_nice() {
        let r = nice(127, 10);
        assert!(r.is_nice_friedman);
        assert_eq!(r.witness.as_deref(), Some("-1+2^7"));
        assert_eq!(r.ops_used.add, 1);
        assert_eq!(r.ops_used.pow, 1);
        assert_eq!(r.ops_used.negate, 1);
    }

    #[test]
    fn twenty_five_is_friedman_but_not_nice() {
        let r = nice(25, 10);
        assert!(!r.is_nice_friedman);
        assert!(r.witness.is_none());
        let r = is_friedman_any_order(
            &BigInt::from(25),
            10,
            &EvalCaps::default(),
            &SpanConfig::default(),
        )
        .unwrap();
        assert!(r.is_nice_friedman);
        let witness = r.witness.unwrap();
        let ast = parse_witness(&witness, 10).unwrap();
        assert_eq!(
            eval_witness(&ast, 10, &EvalCaps::default()).unwrap(),
            ExactValue::integer(25)
        );
        assert_eq!(witness, "5^2");
    }

    #[test]
    fn powers_of_ten_are_not_nice() {
        for n in [10i64, 100, 1000] {
            let r = nice(n, 10);
            assert!(!r.is_nice_friedman, "{n} misclassified");
        }
    }

    #[test]
    fn three_four_three_is_nice() {
        let r = nice(343, 10);
        assert!(r.is_nice_friedman);
        assert_eq!(r.witness.as_deref(), Some("(3+4)^3"));
    }

    #[test]
    fn binary_two_fails_the_pure_concatenation_rule() {
        // 2 in binary is "10"; its only route to 2 is the bare atom
        let r = nice(2, 2);
        assert!(!r.is_nice_friedman);
    }

    #[test]
    fn single_digit_targets_are_never_nice() {
        for n in 1..=9i64 {
            assert!(!nice(n, 10).is_nice_friedman);
        }
    }

    #[test]
    fn rejects_nonpositive_targets() {
        let err = is_nice_friedman(
            &BigInt::from(0),
            10,
            &EvalCaps::default(),
            &SpanConfig::default(),
        )
        .unwrap_err();
        assert_eq!(err, SpanError::NonPositiveTarget);
    }

    #[test]
    fn scan_to_200_finds_only_127() {
        let report =
            scan_density(10, 200, &EvalCaps::default(), &SpanConfig::default()).unwrap();
        assert_eq!(report.count, 1);
        assert_eq!(report.members[0].n, 127);
        let report =
            scan_density(10, 100, &EvalCaps::default(), &SpanConfig::default()).unwrap();
        assert_eq!(report.count, 0);
    }

    #[test]
    fn scan_members_reverify() {
        let report = scan_density(10, 200, &EvalCaps::default(), &SpanConfig::default()).unwrap();
        for m in &report.members {
            let again = nice(m.n as i64, 10);
            assert!(again.is_nice_friedman);
            assert_eq!(again.witness.as_deref(), Some(m.witness.as_str()));
        }
    }

    #[test]
    fn scan_respects_ceiling() {
        let config = SpanConfig {
            max_scan: 50,
            ..SpanConfig::default()
        };
        let err = scan_density(10, 51, &EvalCaps::default(), &config).unwrap_err();
        assert_eq!(err, SpanError::ScanTooLarge { limit: 51, max: 50 });
    }
}
