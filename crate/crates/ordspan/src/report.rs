//! Report assembly and deterministic emission (json / csv / table).
//!
//! All serialization is byte-deterministic: struct field order is fixed,
//! collections are sorted, line endings are LF, output is UTF-8. CSV column
//! layouts are documented in the README.

use std::collections::BTreeSet;
use std::io::{self, Write};
use std::path::Path;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;

use crate::growth::{density_verdict, DensityVerdict};
use crate::numeric::EvalCaps;
use crate::span::{DigitString, SpanConfig, SpanError, SpanSet};
use crate::tuple::{PrefixCodeReport, RepeatedDigitAnalyzer, ValueTuple};
use crate::verify::DensityReport;

/// Published reference values vendored as fixtures, so match columns are
/// self-documenting.
pub mod fixtures {
    /// Binary table, new radical-free sets for n = 1..5.
    pub const BINARY_NEW_RADICAL_FREE: [&[i64]; 5] =
        [&[], &[2, 3], &[7], &[5, 6, 15], &[10, 12, 14, 21, 26, 28, 31]];
    /// Binary table, counts column for n = 1..7.
    pub const BINARY_COUNTS: [u64; 7] = [0, 2, 1, 3, 7, 23, 80];
    /// Binary table, N' column for n = 1..7.
    pub const BINARY_N_PRIME: [u64; 7] = [0, 2, 3, 8, 18, 55, 170];
    /// Ternary partial counts for [2]^n, n = 1..6.
    pub const TERNARY_COUNTS: [u64; 6] = [1, 1, 4, 22, 98, 454];
    /// Quaternary partial counts for [3]^n, n = 1..6.
    pub const QUATERNARY_COUNTS: [u64; 6] = [1, 3, 13, 59, 369, 2279];
    /// Binary growth-polynomial coefficients.
    pub const BINARY_POLY_COUNTS: [u64; 5] = [0, 2, 1, 3, 7];
    /// Reference-stated P(3) (the recomputed
    /// value differs in magnitude; only the sign is asserted anywhere).
    pub const STATED_P3: i64 = -175;
    /// Reference-stated P(4).
    pub const STATED_P4: i64 = -740;

    pub fn reference_counts(base: u8) -> Option<&'static [u64]> {
        match base {
            2 => Some(&BINARY_COUNTS),
            3 => Some(&TERNARY_COUNTS),
            4 => Some(&QUATERNARY_COUNTS),
            _ => None,
        }
    }

    pub fn reference_poly_counts(base: u8) -> Option<&'static [u64]> {
        match base {
            2 => Some(&BINARY_POLY_COUNTS),
            3 => Some(&TERNARY_COUNTS),
            4 => Some(&QUATERNARY_COUNTS),
            _ => None,
        }
    }

    pub fn stated_value_at_base(base: u8) -> Option<i64> {
        match base {
            2 => Some(-1),
            3 => Some(STATED_P3),
            4 => Some(STATED_P4),
            _ => None,
        }
    }
}

fn bigint_value(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(n) => Value::from(n),
        None => Value::from(v.to_string()),
    }
}

fn bigint_list(vs: impl IntoIterator<Item = BigInt>) -> Vec<Value> {
    vs.into_iter().map(|v| bigint_value(&v)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub n: u64,
    pub numeral: String,
    pub new_radical_free: Vec<Value>,
    pub count: u64,
    pub n_prime: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_set: Option<Vec<Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_n_prime: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set_match: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count_match: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_prime_match: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableOneReport {
    pub base: u8,
    pub digit: u8,
    pub radical_free_variant: String,
    pub rows: Vec<TableRow>,
    /// Per-cell comparisons that disagree with the vendored expected values.
    pub discrepancies: Vec<String>,
    /// True when every golden binary cell matched (always true for bases
    /// without golden cells).
    pub golden_match: bool,
}

/// Recomputes the radical-free table for `[digit]^n`, n = 1..max_n, with
/// expected columns where the fixtures cover them.
pub fn run_table(
    digit: u8,
    base: u8,
    max_n: usize,
    caps: &EvalCaps,
    config: &SpanConfig,
) -> Result<TableOneReport, SpanError> {
    let mut analyzer = RepeatedDigitAnalyzer::new(digit, base, *caps, *config)?;
    let mut rows = Vec::new();
    let mut discrepancies = Vec::new();
    let mut golden_match = true;
    let golden = base == 2 && digit == 1;
    let reference_counts = if digit == expected_digit(base) {
        fixtures::reference_counts(base)
    } else {
        None
    };
    for n in 1..=max_n {
        let numeral = DigitString::repeated(digit, base, n)?.to_string();
        let set = analyzer.new_radical_free(n)?;
        let count = set.len() as u64;
        let n_prime = analyzer.prefix_code(n)?.max_prefix_code_size as u64;

        let expected_set: Option<Vec<BigInt>> = if golden && n <= 5 {
            Some(
                fixtures::BINARY_NEW_RADICAL_FREE[n - 1]
                    .iter()
                    .map(|&v| BigInt::from(v))
                    .collect(),
            )
        } else {
            None
        };
        let expected_count = reference_counts.and_then(|c| c.get(n - 1)).copied();
        let expected_n_prime = if golden {
            fixtures::BINARY_N_PRIME.get(n - 1).copied()
        } else {
            None
        };

        let set_match = expected_set.as_ref().map(|e| {
            let got: BTreeSet<&BigInt> = set.iter().collect();
            let want: BTreeSet<&BigInt> = e.iter().collect();
            got == want
        });
        let count_match = expected_count.map(|e| e == count);
        let n_prime_match = expected_n_prime.map(|e| e == n_prime);
        for (label, m) in [
            ("set", set_match),
            ("count", count_match),
            ("n_prime", n_prime_match),
        ] {
            if m == Some(false) {
                discrepancies.push(format!("n={n}: {label} differs from expected"));
                if golden {
                    golden_match = false;
                }
            }
        }
        rows.push(TableRow {
            n: n as u64,
            numeral,
            new_radical_free: bigint_list(set),
            count,
            n_prime,
            expected_set: expected_set.map(bigint_list),
            expected_count,
            expected_n_prime,
            set_match,
            count_match,
            n_prime_match,
        });
    }
    Ok(TableOneReport {
        base,
        digit,
        radical_free_variant: config.radical_free_variant.as_str().to_string(),
        rows,
        discrepancies,
        golden_match,
    })
}

fn expected_digit(base: u8) -> u8 {
    // the repeated digit the reference tables use per base: 1, 2, 3 for bases 2, 3, 4
    base.saturating_sub(1).min(3)
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthBlock {
    pub source: String,
    pub counts: Vec<u64>,
    pub polynomial: String,
    pub value_at_base: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stated_value: Option<i64>,
    pub sign_negative: bool,
    pub root_lo: String,
    pub root_hi: String,
    pub conclusion: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    pub base: u8,
    pub blocks: Vec<GrowthBlock>,
}

pub fn growth_block(source: &str, verdict: &DensityVerdict) -> GrowthBlock {
    GrowthBlock {
        source: source.to_string(),
        counts: verdict.counts.clone(),
        polynomial: verdict.polynomial.to_text(),
        value_at_base: bigint_value(&verdict.value_at_base),
        stated_value: if source == "stated" {
            fixtures::stated_value_at_base(verdict.base)
        } else {
            None
        },
        sign_negative: verdict.value_at_base < BigInt::from(0),
        root_lo: verdict.root_lo.to_string(),
        root_hi: verdict.root_hi.to_string(),
        conclusion: verdict.conclusion.as_str().to_string(),
    }
}

/// Growth verdicts for the stated reference coefficients and, when requested,
/// recomputed coefficients from the engines.
pub fn run_growth(
    base: u8,
    recomputed_counts: Option<Vec<u64>>,
    explicit_counts: Option<Vec<u64>>,
) -> Result<GrowthReport, crate::growth::GrowthError> {
    let mut blocks = Vec::new();
    if let Some(counts) = explicit_counts {
        let v = density_verdict(&counts, base)?;
        blocks.push(growth_block("explicit", &v));
    } else {
        if let Some(counts) = fixtures::reference_poly_counts(base) {
            let v = density_verdict(counts, base)?;
            blocks.push(growth_block("stated", &v));
        }
        if let Some(counts) = recomputed_counts {
            let v = density_verdict(&counts, base)?;
            blocks.push(growth_block("recomputed", &v));
        }
    }
    Ok(GrowthReport { base, blocks })
}

#[derive(Debug, Clone, Serialize)]
pub struct SpanReportEntry {
    pub value: String,
    pub witness: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpanReport {
    pub source: String,
    pub base: u8,
    pub size: u64,
    pub cap_hit: bool,
    pub entries: Vec<SpanReportEntry>,
}

pub fn span_report(span: &SpanSet) -> SpanReport {
    SpanReport {
        source: span.source.to_string(),
        base: span.source.base(),
        size: span.entries().len() as u64,
        cap_hit: span.cap_hit(),
        entries: span
            .entries()
            .iter()
            .map(|(v, w)| SpanReportEntry {
                value: v.to_string(),
                witness: w.text(),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TupleReport {
    pub source: String,
    pub base: u8,
    pub total_tuples: u64,
    pub tuples: Vec<TupleEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TupleEntry {
    pub elements: Vec<Value>,
    pub blocks: Vec<String>,
}

pub fn tuple_report(set: &crate::tuple::TupleSpanSet) -> TupleReport {
    TupleReport {
        source: set.source.to_string(),
        base: set.source.base(),
        total_tuples: set.tuples.len() as u64,
        tuples: set
            .tuples
            .iter()
            .map(|(t, blocks)| TupleEntry {
                elements: t.iter().map(bigint_value).collect(),
                blocks: blocks
                    .iter()
                    .map(|b| format!("[{}..{}) {}", b.start, b.end, b.expr))
                    .collect(),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PrefixCodeSummary {
    pub source: String,
    pub total_tuples: u64,
    pub max_prefix_code_size: u64,
    pub leaves: Vec<Vec<Value>>,
}

pub fn prefix_code_summary(source: &DigitString, report: &PrefixCodeReport) -> PrefixCodeSummary {
    PrefixCodeSummary {
        source: source.to_string(),
        total_tuples: report.total_tuples as u64,
        max_prefix_code_size: report.max_prefix_code_size as u64,
        leaves: report
            .leaves
            .iter()
            .map(|t: &ValueTuple| t.iter().map(bigint_value).collect())
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub target: String,
    pub base: u8,
    pub mode: String,
    pub is_nice_friedman: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub ops_used: crate::expr::OpCounts,
    pub cap_hit: bool,
    pub note: String,
}

pub fn verify_report(result: &crate::verify::WitnessResult, mode: &str) -> VerifyReport {
    let note = if result.is_nice_friedman {
        "witness found".to_string()
    } else if result.cap_hit {
        "not found within caps".to_string()
    } else {
        "no witness exists".to_string()
    };
    VerifyReport {
        target: result.target.to_string(),
        base: result.base,
        mode: mode.to_string(),
        is_nice_friedman: result.is_nice_friedman,
        witness: result.witness.clone(),
        ops_used: result.ops_used,
        cap_hit: result.cap_hit,
        note,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub base: u8,
    pub limit: u64,
    pub count: u64,
    pub ratio: f64,
    pub cap_hit: bool,
    pub members: Vec<ScanMember>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanMember {
    pub n: u64,
    pub witness: String,
}

pub fn scan_report(report: &DensityReport) -> ScanReport {
    ScanReport {
        base: report.base,
        limit: report.limit,
        count: report.count,
        ratio: report.ratio,
        cap_hit: report.cap_hit,
        members: report
            .members
            .iter()
            .map(|m| ScanMember {
                n: m.n,
                witness: m.witness.clone(),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundRow {
    pub l: u64,
    pub catalan: Value,
    pub fine: Value,
    pub coarse: Value,
    pub fine_below_coarse: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub rows: Vec<BoundRow>,
}

pub fn bound_report(max_l: u64) -> BoundReport {
    let rows = (1..=max_l)
        .map(|l| {
            let b = crate::growth::expression_string_bound(l);
            BoundRow {
                l,
                catalan: bigint_value(&crate::growth::catalan(l - 1)),
                fine_below_coarse: b.fine <= b.coarse,
                fine: bigint_value(&b.fine),
                coarse: bigint_value(&b.coarse),
            }
        })
        .collect();
    BoundReport { rows }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    Json,
    Csv,
    #[default]
    Table,
}

impl OutputFormat {
    pub fn parse(text: &str) -> Option<OutputFormat> {
        match text {
            "json" => Some(OutputFormat::Json),
            "csv" => Some(OutputFormat::Csv),
            "table" => Some(OutputFormat::Table),
            _ => None,
        }
    }
}

/// Text renderings beyond JSON; every report type provides both.
pub trait Render: Serialize {
    fn to_csv(&self) -> String;
    fn to_table(&self) -> String;
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn join_values(vs: &[Value]) -> String {
    vs.iter()
        .map(|v| match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        })
        .collect::<Vec<_>>()
        .join(";")
}

impl Render for TableOneReport {
    fn to_csv(&self) -> String {
        let mut out = String::from(
            "n,numeral,new_radical_free,count,n_prime,expected_count,expected_n_prime,set_match,count_match,n_prime_match\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                r.n,
                csv_field(&r.numeral),
                csv_field(&join_values(&r.new_radical_free)),
                r.count,
                r.n_prime,
                opt(&r.expected_count),
                opt(&r.expected_n_prime),
                opt(&r.set_match),
                opt(&r.count_match),
                opt(&r.n_prime_match),
            ));
        }
        out
    }

    fn to_table(&self) -> String {
        let mut out = format!(
            "radical-free table: base {} digit {} ({})\n",
            self.base, self.digit, self.radical_free_variant
        );
        out.push_str("  n  numeral       count  n'    new radical-free\n");
        for r in &self.rows {
            out.push_str(&format!(
                "  {:<2} {:<13} {:<6} {:<5} {{{}}}{}\n",
                r.n,
                r.numeral,
                r.count,
                r.n_prime,
                join_values(&r.new_radical_free).replace(';', ","),
                match (r.count_match, r.n_prime_match, r.set_match) {
                    (Some(false), _, _) | (_, Some(false), _) | (_, _, Some(false)) =>
                        "  [MISMATCH vs expected]",
                    (Some(true), _, _) | (_, Some(true), _) | (_, _, Some(true)) => "  [ok]",
                    _ => "",
                }
            ));
        }
        for d in &self.discrepancies {
            out.push_str(&format!("discrepancy: {d}\n"));
        }
        out
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

impl Render for GrowthReport {
    fn to_csv(&self) -> String {
        let mut out = String::from(
            "base,source,counts,polynomial,value_at_base,stated_value,sign_negative,root_lo,root_hi,conclusion\n",
        );
        for b in &self.blocks {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                self.base,
                b.source,
                b.counts
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(";"),
                csv_field(&b.polynomial),
                join_values(std::slice::from_ref(&b.value_at_base)),
                opt(&b.stated_value),
                b.sign_negative,
                b.root_lo,
                b.root_hi,
                b.conclusion,
            ));
        }
        out
    }

    fn to_table(&self) -> String {
        let mut out = format!("growth analysis: base {}\n", self.base);
        for b in &self.blocks {
            out.push_str(&format!(
                "  [{}] P(x) = {}\n    P({}) = {}{}  root in [{}, {}]  -> {}\n",
                b.source,
                b.polynomial,
                self.base,
                join_values(std::slice::from_ref(&b.value_at_base)),
                b.stated_value
                    .map(|v| format!(" (stated: {v})"))
                    .unwrap_or_default(),
                b.root_lo,
                b.root_hi,
                b.conclusion,
            ));
        }
        out
    }
}

impl Render for SpanReport {
    fn to_csv(&self) -> String {
        let mut out = String::from("value,witness\n");
        for e in &self.entries {
            out.push_str(&format!("{},{}\n", csv_field(&e.value), csv_field(&e.witness)));
        }
        out
    }

    fn to_table(&self) -> String {
        let mut out = format!(
            "span of \"{}\" (base {}): {} values{}\n",
            self.source,
            self.base,
            self.size,
            if self.cap_hit { " [cap hit]" } else { "" }
        );
        for e in &self.entries {
            out.push_str(&format!("  {:>16}  =  {}\n", e.value, e.witness));
        }
        out
    }
}

impl Render for TupleReport {
    fn to_csv(&self) -> String {
        let mut out = String::from("elements,blocks\n");
        for t in &self.tuples {
            out.push_str(&format!(
                "{},{}\n",
                csv_field(&join_values(&t.elements)),
                csv_field(&t.blocks.join(" | "))
            ));
        }
        out
    }

    fn to_table(&self) -> String {
        let mut out = format!(
            "tuple span of \"{}\" (base {}): {} tuples\n",
            self.source, self.base, self.total_tuples
        );
        for t in &self.tuples {
            out.push_str(&format!(
                "  ({})  via  {}\n",
                join_values(&t.elements).replace(';', ", "),
                t.blocks.join("  ")
            ));
        }
        out
    }
}

impl Render for PrefixCodeSummary {
    fn to_csv(&self) -> String {
        let mut out = String::from("leaf\n");
        for leaf in &self.leaves {
            out.push_str(&format!("{}\n", csv_field(&join_values(leaf))));
        }
        out
    }

    fn to_table(&self) -> String {
        let mut out = format!(
            "prefix code for \"{}\": {} tuples, N' = {}\n",
            self.source, self.total_tuples, self.max_prefix_code_size
        );
        for leaf in &self.leaves {
            out.push_str(&format!("  ({})\n", join_values(leaf).replace(';', ", ")));
        }
        out
    }
}

impl Render for VerifyReport {
    fn to_csv(&self) -> String {
        format!(
            "target,base,mode,is_nice_friedman,witness,cap_hit\n{},{},{},{},{},{}\n",
            self.target,
            self.base,
            self.mode,
            self.is_nice_friedman,
            csv_field(self.witness.as_deref().unwrap_or("")),
            self.cap_hit
        )
    }

    fn to_table(&self) -> String {
        match &self.witness {
            Some(w) => format!(
                "{} (base {}) is {}: {} = {}\n",
                self.target,
                self.base,
                if self.mode == "nice" {
                    "a nice Friedman number"
                } else {
                    "a Friedman number"
                },
                self.target,
                w
            ),
            None => format!(
                "{} (base {}) is not {} ({})\n",
                self.target,
                self.base,
                if self.mode == "nice" {
                    "a nice Friedman number"
                } else {
                    "a Friedman number"
                },
                self.note
            ),
        }
    }
}

impl Render for ScanReport {
    fn to_csv(&self) -> String {
        let mut out = String::from("n,witness\n");
        for m in &self.members {
            out.push_str(&format!("{},{}\n", m.n, csv_field(&m.witness)));
        }
        out
    }

    fn to_table(&self) -> String {
        let mut out = format!(
            "scan base {} up to {}: F = {} (ratio {}){}\n",
            self.base,
            self.limit,
            self.count,
            self.ratio,
            if self.cap_hit { " [cap hit]" } else { "" }
        );
        for m in &self.members {
            out.push_str(&format!("  {} = {}\n", m.n, m.witness));
        }
        out
    }
}

impl Render for BoundReport {
    fn to_csv(&self) -> String {
        let mut out = String::from("l,catalan,fine,coarse,fine_below_coarse\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.l,
                join_values(std::slice::from_ref(&r.catalan)),
                join_values(std::slice::from_ref(&r.fine)),
                join_values(std::slice::from_ref(&r.coarse)),
                r.fine_below_coarse
            ));
        }
        out
    }

    fn to_table(&self) -> String {
        let mut out = String::from("expression string bounds per digit count l\n");
        out.push_str("  l   C(l-1)           2*7^(l-1)*C(l-1)                28^l\n");
        for r in &self.rows {
            out.push_str(&format!(
                "  {:<3} {:<16} {:<31} {}\n",
                r.l,
                join_values(std::slice::from_ref(&r.catalan)),
                join_values(std::slice::from_ref(&r.fine)),
                join_values(std::slice::from_ref(&r.coarse)),
            ));
        }
        out
    }
}

/// Renders the report in the requested format and writes it to the path or
/// stdout; returns the byte count written.
pub fn emit<R: Render>(
    report: &R,
    format: OutputFormat,
    out: Option<&Path>,
) -> io::Result<u64> {
    let bytes = render(report, format);
    match out {
        Some(path) => std::fs::write(path, &bytes).map_err(|e| {
            io::Error::new(e.kind(), format!("writing {}: {e}", path.display()))
        })?,
        None => io::stdout().write_all(&bytes)?,
    }
    Ok(bytes.len() as u64)
}

pub fn render<R: Render>(report: &R, format: OutputFormat) -> Vec<u8> {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s.into_bytes()
        }
        OutputFormat::Csv => report.to_csv().into_bytes(),
        OutputFormat::Table => report.to_table().into_bytes(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::span::SpanConfig;

    #[test]
    fn binary_table_matches_golden_rows() {
        let report = run_table(1, 2, 5, &EvalCaps::default(), &SpanConfig::default()).unwrap();
        assert!(report.golden_match);
        assert!(report.discrepancies.is_empty());
        let counts: Vec<u64> = report.rows.iter().map(|r| r.count).collect();
        assert_eq!(counts, vec![0, 2, 1, 3, 7]);
        let n_primes: Vec<u64> = report.rows.iter().map(|r| r.n_prime).collect();
        assert_eq!(n_primes, vec![0, 2, 3, 8, 18]);
    }

    #[test]
    fn table_row_one_is_empty() {
        let report = run_table(1, 2, 1, &EvalCaps::default(), &SpanConfig::default()).unwrap();
        let r = &report.rows[0];
        assert_eq!(r.numeral, "1");
        assert!(r.new_radical_free.is_empty());
        assert_eq!(r.count, 0);
        assert_eq!(r.n_prime, 0);
    }

    #[test]
    fn ternary_row_two_is_a_reported_discrepancy() {
        let report = run_table(2, 3, 2, &EvalCaps::default(), &SpanConfig::default()).unwrap();
        // the reference count is 1 at n=2; the default predicate finds none
        assert_eq!(report.rows[1].count, 0);
        assert_eq!(report.rows[1].expected_count, Some(1));
        assert_eq!(report.rows[1].count_match, Some(false));
        assert!(!report.discrepancies.is_empty());
        // report-level, not failure-level
        assert!(report.golden_match);
    }

    #[test]
    fn json_row_shape() {
        let report = run_table(1, 2, 2, &EvalCaps::default(), &SpanConfig::default()).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        let row = &json["rows"][1];
        assert_eq!(row["n"], 2);
        assert_eq!(row["numeral"], "11");
        assert_eq!(row["new_radical_free"], serde_json::json!([2, 3]));
        assert_eq!(row["count"], 2);
        assert_eq!(row["n_prime"], 2);
    }

    #[test]
    fn emission_is_deterministic() {
        let report = run_table(1, 2, 3, &EvalCaps::default(), &SpanConfig::default()).unwrap();
        for format in [OutputFormat::Json, OutputFormat::Csv, OutputFormat::Table] {
            let a = render(&report, format);
            let b = render(&report, format);
            assert_eq!(a, b);
            assert!(!String::from_utf8(a).unwrap().contains('\r'));
        }
    }

    #[test]
    fn empty_scan_csv_is_header_only() {
        let report = scan_report(&crate::verify::DensityReport {
            base: 10,
            limit: 5,
            count: 0,
            ratio: 0.0,
            members: vec![],
            cap_hit: false,
        });
        assert_eq!(report.to_csv(), "n,witness\n");
    }

    #[test]
    fn growth_report_shows_stated_values() {
        let report = run_growth(3, None, None).unwrap();
        let block = &report.blocks[0];
        assert_eq!(block.source, "stated");
        assert_eq!(block.stated_value, Some(-175));
        assert_eq!(block.value_at_base, Value::from(-649));
        assert!(block.sign_negative);
    }
}
