//! Tuple spans over contiguous partitions, the new-tuple sets M(n), and the
//! maximum prefix-code size N'.
//!
//! A tuple is obtained by cutting the digit string into contiguous blocks
//! (order preserved) and letting each block contribute one radical-free
//! positive integer from its ordered span. N' is the size of the largest
//! subset in which no tuple is a proper prefix of another; that subset is
//! exactly the extension-maximal tuples: every member of an antichain
//! extends to a leaf of the prefix forest, two incomparable tuples cannot
//! share a leaf, and the leaves themselves are pairwise incomparable, so
//! the leaf set is a maximum antichain.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;

use crate::span::{DigitString, Enumerator, SpanConfig, SpanError};
use crate::numeric::EvalCaps;

/// Ordered list of positive integers realized by one block partition.
pub type ValueTuple = Vec<BigInt>;

/// How one tuple is realized: per-block digit range and witness expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockWitness {
    pub start: usize,
    pub end: usize,
    pub expr: String,
}

#[derive(Debug)]
pub struct TupleSpanSet {
    pub source: DigitString,
    pub tuples: BTreeMap<ValueTuple, Vec<BlockWitness>>,
}

impl TupleSpanSet {
    pub fn tuple_set(&self) -> BTreeSet<ValueTuple> {
        self.tuples.keys().cloned().collect()
    }
}

/// All tuples realizable from contiguous, order-preserving blocks of `s`,
/// each block computing one radical-free positive integer.
pub fn tuple_span(
    s: &DigitString,
    caps: &EvalCaps,
    config: &SpanConfig,
) -> Result<TupleSpanSet, SpanError> {
    if s.len() > config.max_len {
        return Err(SpanError::TooLong {
            len: s.len(),
            max: config.max_len,
        });
    }
    let mut en = Enumerator::new(s.base(), *caps, *config);
    Ok(tuple_span_with(&mut en, s))
}

pub fn tuple_span_with(en: &mut Enumerator, s: &DigitString) -> TupleSpanSet {
    let len = s.len();
    let digits = s.digits().to_vec();
    // per-range radical-free candidates, sorted for deterministic output
    let mut candidates: BTreeMap<(usize, usize), Vec<(BigInt, String)>> = BTreeMap::new();
    for i in 0..len {
        for j in i + 1..=len {
            let mut members: Vec<(BigInt, String)> = en
                .radical_free_members(&digits[i..j])
                .into_iter()
                .map(|(v, w)| (v, w.text()))
                .collect();
            members.sort_by(|a, b| a.0.cmp(&b.0));
            candidates.insert((i, j), members);
        }
    }
    let mut tuples: BTreeMap<ValueTuple, Vec<BlockWitness>> = BTreeMap::new();
    let mut elements: ValueTuple = Vec::new();
    let mut blocks: Vec<BlockWitness> = Vec::new();
    collect_tuples(len, 0, &candidates, &mut elements, &mut blocks, &mut tuples);
    TupleSpanSet {
        source: s.clone(),
        tuples,
    }
}

fn collect_tuples(
    len: usize,
    pos: usize,
    candidates: &BTreeMap<(usize, usize), Vec<(BigInt, String)>>,
    elements: &mut ValueTuple,
    blocks: &mut Vec<BlockWitness>,
    out: &mut BTreeMap<ValueTuple, Vec<BlockWitness>>,
) {
    if pos == len {
        if !elements.is_empty() {
            out.entry(elements.clone()).or_insert_with(|| blocks.clone());
        }
        return;
    }
    for j in pos + 1..=len {
        for (value, expr) in &candidates[&(pos, j)] {
            elements.push(value.clone());
            blocks.push(BlockWitness {
                start: pos,
                end: j,
                expr: expr.clone(),
            });
            collect_tuples(len, j, candidates, elements, blocks, out);
            elements.pop();
            blocks.pop();
        }
    }
}

/// N' report: the leaves of the prefix forest form the largest subset with
/// no proper-prefix pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixCodeReport {
    pub total_tuples: usize,
    pub max_prefix_code_size: usize,
    pub leaves: BTreeSet<ValueTuple>,
}

pub fn max_prefix_code_size<'a, I>(tuples: I) -> PrefixCodeReport
where
    I: IntoIterator<Item = &'a ValueTuple>,
{
    let all: Vec<&ValueTuple> = tuples.into_iter().collect();
    let mut proper_prefixes: HashSet<&[BigInt]> = HashSet::new();
    for t in &all {
        for k in 1..t.len() {
            proper_prefixes.insert(&t[..k]);
        }
    }
    let leaves: BTreeSet<ValueTuple> = all
        .iter()
        .filter(|t| !proper_prefixes.contains(t.as_slice()))
        .map(|t| (*t).clone())
        .collect();
    PrefixCodeReport {
        total_tuples: all.len(),
        max_prefix_code_size: leaves.len(),
        leaves,
    }
}

/// Baseline against which M(n) is formed. The original definition subtracts
/// only n-1; producibility need not be monotone outside binary, so the
/// union variant is also available for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MnBaseline {
    #[default]
    PreviousOnly,
    AllSmaller,
}

/// M(n): tuples of `[digit]^n` absent from the baseline tuple spans.
pub fn new_tuples(
    digit: u8,
    base: u8,
    n: usize,
    caps: &EvalCaps,
    config: &SpanConfig,
    baseline: MnBaseline,
) -> Result<BTreeSet<ValueTuple>, SpanError> {
    let mut analyzer = RepeatedDigitAnalyzer::new(digit, base, *caps, *config)?;
    analyzer.new_tuples(n, baseline)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceCheck {
    pub n: usize,
    pub coefficients: Vec<u64>,
    pub lhs: u64,
    pub rhs: u64,
    pub satisfied: bool,
}

/// Verifies |M(n)| >= sum c_i * |M(n-i)|.
pub fn check_recurrence(
    digit: u8,
    base: u8,
    n: usize,
    coefficients: &[u64],
    caps: &EvalCaps,
    config: &SpanConfig,
) -> Result<RecurrenceCheck, SpanError> {
    let mut analyzer = RepeatedDigitAnalyzer::new(digit, base, *caps, *config)?;
    analyzer.check_recurrence(n, coefficients)
}

/// Shared-memo session for repeated-digit strings `[digit]^n`; every span,
/// tuple span, and M(n) for one (digit, base) reuses the same enumerator.
pub struct RepeatedDigitAnalyzer {
    digit: u8,
    base: u8,
    enumerator: Enumerator,
    tuple_cache: BTreeMap<usize, BTreeSet<ValueTuple>>,
}

impl RepeatedDigitAnalyzer {
    pub fn new(
        digit: u8,
        base: u8,
        caps: EvalCaps,
        config: SpanConfig,
    ) -> Result<RepeatedDigitAnalyzer, SpanError> {
        // validates digit/base up front
        DigitString::repeated(digit, base, 1)?;
        Ok(RepeatedDigitAnalyzer {
            digit,
            base,
            enumerator: Enumerator::new(base, caps, config),
            tuple_cache: BTreeMap::new(),
        })
    }

    pub fn enumerator(&mut self) -> &mut Enumerator {
        &mut self.enumerator
    }

    fn string(&self, n: usize) -> Result<DigitString, SpanError> {
        let s = DigitString::repeated(self.digit, self.base, n)?;
        if n > self.enumerator.config().max_len {
            return Err(SpanError::TooLong {
                len: n,
                max: self.enumerator.config().max_len,
            });
        }
        Ok(s)
    }

    pub fn tuple_span(&mut self, n: usize) -> Result<&BTreeSet<ValueTuple>, SpanError> {
        if !self.tuple_cache.contains_key(&n) {
            let s = self.string(n)?;
            let set = tuple_span_with(&mut self.enumerator, &s).tuple_set();
            self.tuple_cache.insert(n, set);
        }
        Ok(&self.tuple_cache[&n])
    }

    pub fn tuple_span_full(&mut self, n: usize) -> Result<TupleSpanSet, SpanError> {
        let s = self.string(n)?;
        Ok(tuple_span_with(&mut self.enumerator, &s))
    }

    pub fn new_radical_free(&mut self, n: usize) -> Result<BTreeSet<BigInt>, SpanError> {
        self.string(n)?;
        crate::span::new_radical_free_with(&mut self.enumerator, self.digit, n)
    }

    pub fn prefix_code(&mut self, n: usize) -> Result<PrefixCodeReport, SpanError> {
        let tuples = self.tuple_span(n)?;
        Ok(max_prefix_code_size(tuples.iter()))
    }

    pub fn new_tuples(
        &mut self,
        n: usize,
        baseline: MnBaseline,
    ) -> Result<BTreeSet<ValueTuple>, SpanError> {
        let mut fresh = self.tuple_span(n)?.clone();
        let lower = match baseline {
            MnBaseline::PreviousOnly => (n.saturating_sub(1)..n).filter(|&m| m >= 1).collect::<Vec<_>>(),
            MnBaseline::AllSmaller => (1..n).collect(),
        };
        for m in lower {
            let older = self.tuple_span(m)?.clone();
            for t in &older {
                fresh.remove(t);
            }
        }
        Ok(fresh)
    }

    pub fn check_recurrence(
        &mut self,
        n: usize,
        coefficients: &[u64],
    ) -> Result<RecurrenceCheck, SpanError> {
        let lhs = self.new_tuples(n, MnBaseline::PreviousOnly)?.len() as u64;
        let mut rhs: u64 = 0;
        for (idx, &c) in coefficients.iter().enumerate() {
            let offset = idx + 1;
            if c == 0 {
                continue;
            }
            assert!(n > offset, "n must exceed every coefficient offset");
            let m = self.new_tuples(n - offset, MnBaseline::PreviousOnly)?.len() as u64;
            rhs += c * m;
        }
        Ok(RecurrenceCheck {
            n,
            coefficients: coefficients.to_vec(),
            lhs,
            rhs,
            satisfied: lhs >= rhs,
        })
    }
}
