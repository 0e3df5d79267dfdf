//! Exact arithmetic over ordered digit spans: enumerate every value an
//! in-order digit string can compute, analyze radical-free tables and tuple
//! prefix codes for repeated-digit numerals, derive growth-polynomial density
//! verdicts, and decide nice-Friedman membership with printable witnesses.

pub mod expr;
pub mod growth;
pub mod numeric;
pub mod report;
pub mod span;
pub mod tuple;
pub mod verify;

pub use expr::{eval_witness, format_witness, parse_witness, ExprNode, OpCounts};
pub use numeric::{BinaryOp, EvalCaps, ExactValue, Exclusion, RadicalFreeVariant};
pub use span::{ordered_span, DigitString, Enumerator, SpanConfig, SpanError, SpanSet};
pub use tuple::{tuple_span, MnBaseline, RepeatedDigitAnalyzer, TupleSpanSet};
pub use verify::{is_friedman_any_order, is_nice_friedman, scan_density};
