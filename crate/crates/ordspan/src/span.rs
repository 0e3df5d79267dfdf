//! Order-preserving span enumeration.
//!
//! For a digit string `s`, the ordered span is every value computable from
//! the digits of `s` in their original order, using digit concatenation,
//! the four basic operations, exponentiation, and unary negation. The
//! engine is an interval dynamic program: the value set of a substring is
//! its atom value (when the leading-zero policy allows it), every result of
//! the six normalized binary operations across every split point, and the
//! negation of every member. One deterministic witness expression is kept
//! per value.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::expr::{format_witness, numeral_value, ExprNode};
use crate::numeric::{
    apply_binary_with, radical_free, BinaryOp, EvalCaps, EvalOutcome, ExactValue,
    ExponentPolicy, RadicalFreeVariant,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpanError {
    #[error("base {0} out of range [2, 36]")]
    BadBase(u8),
    #[error("digit string must be nonempty")]
    EmptyDigits,
    #[error("digit {digit} invalid in base {base}")]
    DigitOutOfRange { digit: u8, base: u8 },
    #[error("string of length {len} exceeds the configured maximum {max}")]
    TooLong { len: usize, max: usize },
    #[error("target must be a positive integer")]
    NonPositiveTarget,
    #[error("scan limit {limit} exceeds the configured ceiling {max}")]
    ScanTooLarge { limit: u64, max: u64 },
}

/// A base-b digit sequence, most significant digit first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DigitString {
    base: u8,
    digits: Vec<u8>,
}

impl DigitString {
    pub fn new(base: u8, digits: Vec<u8>) -> Result<DigitString, SpanError> {
        if !(2..=36).contains(&base) {
            return Err(SpanError::BadBase(base));
        }
        if digits.is_empty() {
            return Err(SpanError::EmptyDigits);
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= base) {
            return Err(SpanError::DigitOutOfRange { digit: d, base });
        }
        Ok(DigitString { base, digits })
    }

    pub fn from_text(text: &str, base: u8) -> Result<DigitString, SpanError> {
        let mut digits = Vec::with_capacity(text.len());
        for c in text.chars() {
            let d = crate::expr::char_digit(c)
                .ok_or(SpanError::DigitOutOfRange { digit: u8::MAX, base })?;
            digits.push(d);
        }
        DigitString::new(base, digits)
    }

    /// The string `[digit]^n`.
    pub fn repeated(digit: u8, base: u8, n: usize) -> Result<DigitString, SpanError> {
        if n == 0 {
            return Err(SpanError::EmptyDigits);
        }
        DigitString::new(base, vec![digit; n])
    }

    /// Base-b representation of a positive integer.
    pub fn of_integer(n: &BigInt, base: u8) -> Result<DigitString, SpanError> {
        use num_traits::{Signed, ToPrimitive, Zero};
        if !n.is_positive() && !n.is_zero() {
            return Err(SpanError::NonPositiveTarget);
        }
        let mut digits = Vec::new();
        let mut v = n.clone();
        let b = BigInt::from(base);
        while !v.is_zero() {
            let (q, r) = num_integer::Integer::div_rem(&v, &b);
            digits.push(r.to_u8().unwrap());
            v = q;
        }
        if digits.is_empty() {
            digits.push(0);
        }
        digits.reverse();
        DigitString::new(base, digits)
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.digits {
            write!(f, "{}", crate::expr::digit_char(d))?;
        }
        Ok(())
    }
}

/// Enumeration conventions that do not change any reference example but must
/// be pinned for reproducibility.
#[derive(Debug, Clone, Copy)]
pub struct SpanConfig {
    /// Multi-digit atoms with a leading zero are rejected unless set.
    pub allow_leading_zero: bool,
    pub exponent_policy: ExponentPolicy,
    pub radical_free_variant: RadicalFreeVariant,
    /// Longest string `ordered_span` will accept.
    pub max_len: usize,
    /// Ceiling for `scan_density`.
    pub max_scan: u64,
}

impl Default for SpanConfig {
    fn default() -> Self {
        SpanConfig {
            allow_leading_zero: false,
            exponent_policy: ExponentPolicy::IntegerOnly,
            radical_free_variant: RadicalFreeVariant::NotPerfectPower,
            max_len: 12,
            max_scan: 10_000_000,
        }
    }
}

/// One canonical witness for a span value, with the metrics used for
/// deterministic tie-breaking: fewest operations, then lowest depth, then
/// lexicographically smallest printed form.
#[derive(Debug, Clone)]
pub struct Witness {
    pub expr: Rc<ExprNode>,
    pub ops: u32,
    pub depth: u32,
}

impl Witness {
    fn atom(digits: Vec<u8>) -> Witness {
        Witness {
            expr: ExprNode::atom(digits),
            ops: 0,
            depth: 1,
        }
    }

    fn neg(w: &Witness) -> Witness {
        Witness {
            expr: ExprNode::neg(w.expr.clone()),
            ops: w.ops + 1,
            depth: w.depth + 1,
        }
    }

    fn bin(op: BinaryOp, lhs: &Witness, rhs: &Witness) -> Witness {
        Witness {
            expr: ExprNode::bin(op, lhs.expr.clone(), rhs.expr.clone()),
            ops: lhs.ops + rhs.ops + 1,
            depth: lhs.depth.max(rhs.depth) + 1,
        }
    }

    pub fn text(&self) -> String {
        format_witness(&self.expr)
    }

    fn beats(&self, other: &Witness) -> bool {
        match (self.ops, self.depth).cmp(&(other.ops, other.depth)) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => self.text() < other.text(),
        }
    }
}

/// The value set of one substring, with cap bookkeeping.
#[derive(Debug, Default)]
pub struct RangeSpan {
    pub entries: BTreeMap<ExactValue, Witness>,
    pub cap_hit: bool,
}

/// The computed ordered span of a full digit string.
#[derive(Debug)]
pub struct SpanSet {
    pub source: DigitString,
    range: Rc<RangeSpan>,
}

impl SpanSet {
    pub fn entries(&self) -> &BTreeMap<ExactValue, Witness> {
        &self.range.entries
    }

    pub fn cap_hit(&self) -> bool {
        self.range.cap_hit
    }

    pub fn contains_integer(&self, n: &BigInt) -> bool {
        self.range
            .entries
            .contains_key(&ExactValue::integer(n.clone()))
    }

    /// The integer members, in numeric order.
    pub fn integer_members(&self) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = self
            .range
            .entries
            .keys()
            .filter_map(|x| x.as_integer().cloned())
            .collect();
        v.sort();
        v
    }
}

/// Memoized span computer for one base. Substring value sets are keyed by
/// digit content, so repeated-digit strings collapse to one computation per
/// length; the result is identical to keying by range.
pub struct Enumerator {
    base: u8,
    caps: EvalCaps,
    config: SpanConfig,
    memo: HashMap<Vec<u8>, Rc<RangeSpan>>,
}

impl Enumerator {
    pub fn new(base: u8, caps: EvalCaps, config: SpanConfig) -> Enumerator {
        Enumerator {
            base,
            caps,
            config,
            memo: HashMap::new(),
        }
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    pub fn caps(&self) -> &EvalCaps {
        &self.caps
    }

    pub fn config(&self) -> &SpanConfig {
        &self.config
    }

    pub fn span(&mut self, digits: &[u8]) -> Rc<RangeSpan> {
        if let Some(r) = self.memo.get(digits) {
            return r.clone();
        }
        let mut result = RangeSpan::default();

        // atom
        if digits[0] != 0 || digits.len() == 1 || self.config.allow_leading_zero {
            let value = ExactValue::integer(numeral_value(digits, self.base));
            if value.numerator().magnitude().bits() <= self.caps.max_value_bits as u64 {
                result
                    .entries
                    .insert(value, Witness::atom(digits.to_vec()));
            } else {
                result.cap_hit = true;
            }
        }

        // binary operations across every split point
        for k in 1..digits.len() {
            let left = self.span(&digits[..k]);
            let right = self.span(&digits[k..]);
            result.cap_hit |= left.cap_hit || right.cap_hit;
            for (lv, lw) in &left.entries {
                for (rv, rw) in &right.entries {
                    for op in BinaryOp::ALL {
                        match apply_binary_with(
                            op,
                            lv,
                            rv,
                            &self.caps,
                            self.config.exponent_policy,
                        ) {
                            EvalOutcome::Value(v) => {
                                consider(&mut result.entries, v, || Witness::bin(op, lw, rw));
                            }
                            EvalOutcome::Excluded(e) => {
                                if e.is_cap() {
                                    result.cap_hit = true;
                                }
                            }
                        }
                    }
                }
            }
        }

        // negation closure
        let negations: Vec<(ExactValue, Witness)> = result
            .entries
            .iter()
            .map(|(v, w)| (v.neg(), Witness::neg(w)))
            .collect();
        for (v, w) in negations {
            consider(&mut result.entries, v, || w);
        }

        let rc = Rc::new(result);
        self.memo.insert(digits.to_vec(), rc.clone());
        rc
    }

    /// The best witness for `target` over the whole string that uses at
    /// least one binary operation, i.e. is not pure digit concatenation.
    ///
    /// Any expression with a binary operation normalizes to either a
    /// top-level binary operation or the negation of one, so searching the
    /// final combination layer for `target` and `-target` is exhaustive.
    pub fn operative_witness(&mut self, digits: &[u8], target: &ExactValue) -> Option<Witness> {
        let full = self.span(digits);
        if let Some(w) = full.entries.get(target) {
            if w.expr.has_binary_op() {
                return Some(w.clone());
            }
        }
        let negated = target.neg();
        let mut best: Option<Witness> = None;
        for k in 1..digits.len() {
            let left = self.span(&digits[..k]);
            let right = self.span(&digits[k..]);
            for (lv, lw) in &left.entries {
                for (rv, rw) in &right.entries {
                    for op in BinaryOp::ALL {
                        if let EvalOutcome::Value(v) = apply_binary_with(
                            op,
                            lv,
                            rv,
                            &self.caps,
                            self.config.exponent_policy,
                        ) {
                            let candidate = if &v == target {
                                Witness::bin(op, lw, rw)
                            } else if v == negated {
                                Witness::neg(&Witness::bin(op, lw, rw))
                            } else {
                                continue;
                            };
                            match &best {
                                Some(b) if !candidate.beats(b) => {}
                                _ => best = Some(candidate),
                            }
                        }
                    }
                }
            }
        }
        best
    }

    /// Radical-free positive integers of a substring span, used as tuple
    /// elements.
    pub fn radical_free_members(&mut self, digits: &[u8]) -> Vec<(BigInt, Witness)> {
        let variant = self.config.radical_free_variant;
        let range = self.span(digits);
        range
            .entries
            .iter()
            .filter_map(|(v, w)| {
                v.as_integer()
                    .filter(|n| radical_free(n, variant))
                    .map(|n| (n.clone(), w.clone()))
            })
            .collect()
    }
}

fn consider<F: FnOnce() -> Witness>(
    entries: &mut BTreeMap<ExactValue, Witness>,
    value: ExactValue,
    make: F,
) {
    match entries.entry(value) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(make());
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let candidate = make();
            if candidate.beats(e.get()) {
                e.insert(candidate);
            }
        }
    }
}

/// Computes span'(s) with full witness tracking.
pub fn ordered_span(
    s: &DigitString,
    caps: &EvalCaps,
    config: &SpanConfig,
) -> Result<SpanSet, SpanError> {
    if s.len() > config.max_len {
        return Err(SpanError::TooLong {
            len: s.len(),
            max: config.max_len,
        });
    }
    let mut en = Enumerator::new(s.base(), *caps, *config);
    let range = en.span(s.digits());
    Ok(SpanSet {
        source: s.clone(),
        range,
    })
}

/// The positional atom value of a digit run, subject to the leading-zero
/// policy.
pub fn atom_value(run: &DigitString, config: &SpanConfig) -> Option<BigInt> {
    if run.digits()[0] == 0 && run.len() > 1 && !config.allow_leading_zero {
        return None;
    }
    Some(numeral_value(run.digits(), run.base()))
}

/// Radical-free integers in span'([digit]^n) that appear in no span of a
/// shorter repetition.
pub fn new_radical_free(
    digit: u8,
    base: u8,
    n: usize,
    caps: &EvalCaps,
    config: &SpanConfig,
) -> Result<BTreeSet<BigInt>, SpanError> {
    let s = DigitString::repeated(digit, base, n)?;
    if s.len() > config.max_len {
        return Err(SpanError::TooLong {
            len: s.len(),
            max: config.max_len,
        });
    }
    let mut en = Enumerator::new(base, *caps, *config);
    new_radical_free_with(&mut en, digit, n)
}

/// Same as [`new_radical_free`] but reusing a caller-held enumerator's memo.
pub fn new_radical_free_with(
    en: &mut Enumerator,
    digit: u8,
    n: usize,
) -> Result<BTreeSet<BigInt>, SpanError> {
    let s = DigitString::repeated(digit, en.base(), n)?;
    let mut fresh: BTreeSet<BigInt> = en
        .radical_free_members(s.digits())
        .into_iter()
        .map(|(v, _)| v)
        .collect();
    for m in 1..n {
        let shorter = DigitString::repeated(digit, en.base(), m)?;
        for (v, _) in en.radical_free_members(shorter.digits()) {
            fresh.remove(&v);
        }
    }
    Ok(fresh)
}

/// Comparison of the enumerated span size against `base^L(s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CardinalityCheck {
    pub span_size: u64,
    pub bound: BigInt,
    pub satisfied: bool,
    /// When set, `span_size` is only a lower bound.
    pub cap_hit: bool,
}

pub fn span_cardinality_check(
    s: &DigitString,
    caps: &EvalCaps,
    config: &SpanConfig,
) -> Result<CardinalityCheck, SpanError> {
    let span = ordered_span(s, caps, config)?;
    let span_size = span.entries().len() as u64;
    let bound = BigInt::from(s.base()).pow(s.len() as u32);
    Ok(CardinalityCheck {
        satisfied: BigInt::from(span_size) < bound,
        span_size,
        bound,
        cap_hit: span.cap_hit(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::eval_witness;

    fn span_of(text: &str, base: u8) -> SpanSet {
        let s = DigitString::from_text(text, base).unwrap();
        ordered_span(&s, &EvalCaps::default(), &SpanConfig::default()).unwrap()
    }

    #[test]
    fn atom_values() {
        let cfg = SpanConfig::default();
        let s = DigitString::from_text("111", 2).unwrap();
        assert_eq!(atom_value(&s, &cfg), Some(BigInt::from(7)));
        let s = DigitString::from_text("1", 2).unwrap();
        assert_eq!(atom_value(&s, &cfg), Some(BigInt::from(1)));
        let s = DigitString::from_text("22", 3).unwrap();
        assert_eq!(atom_value(&s, &cfg), Some(BigInt::from(8)));
        let s = DigitString::from_text("05", 10).unwrap();
        assert_eq!(atom_value(&s, &cfg), None);
        let allow = SpanConfig {
            allow_leading_zero: true,
            ..SpanConfig::default()
        };
        assert_eq!(atom_value(&s, &allow), Some(BigInt::from(5)));
    }

    #[test]
    fn span_of_two_ones_binary() {
        let span = span_of("11", 2);
        let ints = span.integer_members();
        let expected: Vec<BigInt> = [-3i64, -2, -1, 0, 1, 2, 3]
            .iter()
            .map(|&n| BigInt::from(n))
            .collect();
        assert_eq!(ints, expected);
        // every member is an integer here
        assert_eq!(span.entries().len(), 7);
    }

    #[test]
    fn span_of_25_base_10() {
        let span = span_of("25", 10);
        assert!(span.contains_integer(&BigInt::from(25)));
        assert!(span.contains_integer(&BigInt::from(32)));
        assert!(!span.contains_integer(&BigInt::from(52)));
        // 25 is reachable only as the pure-concatenation atom
        let w = &span.entries()[&ExactValue::integer(25)];
        assert!(!w.expr.has_binary_op());
        let w = &span.entries()[&ExactValue::integer(32)];
        assert_eq!(w.text(), "2^5");
    }

    #[test]
    fn witnesses_evaluate_to_their_keys_and_preserve_order() {
        for (text, base) in [("111", 2), ("25", 10), ("222", 3), ("127", 10)] {
            let span = span_of(text, base);
            let source = DigitString::from_text(text, base).unwrap();
            for (v, w) in span.entries() {
                let evaluated = eval_witness(&w.expr, base, &EvalCaps::default()).unwrap();
                assert_eq!(&evaluated, v, "witness {} for {}", w.text(), v);
                let mut leaves = Vec::new();
                w.expr.leaf_digits(&mut leaves);
                assert_eq!(leaves, source.digits(), "digit order for {}", w.text());
            }
        }
    }

    #[test]
    fn negation_symmetry() {
        for (text, base) in [("111", 2), ("25", 10), ("222", 3)] {
            let span = span_of(text, base);
            for v in span.entries().keys() {
                assert!(
                    span.entries().contains_key(&v.neg()),
                    "missing -({v}) in span of {text}"
                );
            }
        }
    }

    #[test]
    fn new_radical_free_binary_rows() {
        let caps = EvalCaps::default();
        let cfg = SpanConfig::default();
        let row = |n: usize| -> Vec<i64> {
            new_radical_free(1, 2, n, &caps, &cfg)
                .unwrap()
                .iter()
                .map(|v| i64::try_from(v).unwrap())
                .collect()
        };
        assert_eq!(row(1), Vec::<i64>::new());
        assert_eq!(row(2), vec![2, 3]);
        assert_eq!(row(3), vec![7]);
        assert_eq!(row(4), vec![5, 6, 15]);
        assert_eq!(row(5), vec![10, 12, 14, 21, 26, 28, 31]);
    }

    #[test]
    fn new_radical_free_ternary_row_three() {
        let set = new_radical_free(2, 3, 3, &EvalCaps::default(), &SpanConfig::default()).unwrap();
        let got: Vec<i64> = set.iter().map(|v| i64::try_from(v).unwrap()).collect();
        assert_eq!(got, vec![3, 6, 10, 26]);
    }

    #[test]
    fn monotone_growth_for_binary_ones() {
        let caps = EvalCaps::default();
        let cfg = SpanConfig::default();
        let mut en = Enumerator::new(2, caps, cfg);
        for n in 1..=5usize {
            let small = en.span(&vec![1u8; n]);
            let large = en.span(&vec![1u8; n + 1]);
            for v in small.entries.keys() {
                assert!(large.entries.contains_key(v), "{v} lost at n={}", n + 1);
            }
        }
    }

    #[test]
    fn cardinality_check_base_28() {
        let caps = EvalCaps::default();
        let cfg = SpanConfig::default();
        let s = DigitString::new(28, vec![7]).unwrap();
        let check = span_cardinality_check(&s, &caps, &cfg).unwrap();
        assert_eq!(check.span_size, 2);
        assert!(check.satisfied);
        let s = DigitString::new(28, vec![1, 1]).unwrap();
        let check = span_cardinality_check(&s, &caps, &cfg).unwrap();
        assert!(check.span_size < 784);
        assert!(check.satisfied);
        let s = DigitString::new(28, vec![1, 1, 1]).unwrap();
        assert!(span_cardinality_check(&s, &caps, &cfg).unwrap().satisfied);
    }

    #[test]
    fn refuses_oversized_strings() {
        let s = DigitString::repeated(1, 2, 13).unwrap();
        let err = ordered_span(&s, &EvalCaps::default(), &SpanConfig::default()).unwrap_err();
        assert_eq!(err, SpanError::TooLong { len: 13, max: 12 });
    }

    #[test]
    fn digit_string_validation() {
        assert_eq!(
            DigitString::new(1, vec![0]).unwrap_err(),
            SpanError::BadBase(1)
        );
        assert_eq!(
            DigitString::new(2, vec![]).unwrap_err(),
            SpanError::EmptyDigits
        );
        assert_eq!(
            DigitString::new(2, vec![2]).unwrap_err(),
            SpanError::DigitOutOfRange { digit: 2, base: 2 }
        );
        let s = DigitString::of_integer(&BigInt::from(127), 10).unwrap();
        assert_eq!(s.digits(), &[1, 2, 7]);
        let s = DigitString::of_integer(&BigInt::from(5), 2).unwrap();
        assert_eq!(s.digits(), &[1, 0, 1]);
    }
}
