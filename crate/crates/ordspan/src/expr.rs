//! Witness expression trees and their printable grammar.
//!
//! Grammar (whitespace forbidden, digits `0-9` then `a-z` for values >= 10):
//!
//! ```text
//! expression := ['-'] term {('+'|'-') term}
//! term       := factor {('*'|'/') factor}
//! factor     := power
//! power      := primary ['^' ['-'] power]        (right-associative; '^-' is pow-neg)
//! primary    := atom | '(' expression ')' | '-' '(' expression ')'
//! atom       := digit+
//! ```

use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::numeric::{
    apply_binary_with, BinaryOp, EvalCaps, EvalOutcome, ExactValue, Exclusion, ExponentPolicy,
};

/// One node of a witness expression. Atom leaves carry the digit run they
/// evaluate as a base-b numeral; an in-order traversal of the leaves must
/// reproduce the source digit string exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprNode {
    Atom { digits: Vec<u8> },
    Neg(Rc<ExprNode>),
    Bin {
        op: BinaryOp,
        lhs: Rc<ExprNode>,
        rhs: Rc<ExprNode>,
    },
}

impl ExprNode {
    pub fn atom(digits: Vec<u8>) -> Rc<ExprNode> {
        Rc::new(ExprNode::Atom { digits })
    }

    pub fn neg(child: Rc<ExprNode>) -> Rc<ExprNode> {
        Rc::new(ExprNode::Neg(child))
    }

    pub fn bin(op: BinaryOp, lhs: Rc<ExprNode>, rhs: Rc<ExprNode>) -> Rc<ExprNode> {
        Rc::new(ExprNode::Bin { op, lhs, rhs })
    }

    /// Appends the in-order leaf digit sequence to `out`.
    pub fn leaf_digits(&self, out: &mut Vec<u8>) {
        match self {
            ExprNode::Atom { digits } => out.extend_from_slice(digits),
            ExprNode::Neg(child) => child.leaf_digits(out),
            ExprNode::Bin { lhs, rhs, .. } => {
                lhs.leaf_digits(out);
                rhs.leaf_digits(out);
            }
        }
    }

    /// Total operation count (binary operations plus unary negations).
    pub fn op_count(&self) -> u32 {
        match self {
            ExprNode::Atom { .. } => 0,
            ExprNode::Neg(child) => 1 + child.op_count(),
            ExprNode::Bin { lhs, rhs, .. } => 1 + lhs.op_count() + rhs.op_count(),
        }
    }

    pub fn depth(&self) -> u32 {
        match self {
            ExprNode::Atom { .. } => 1,
            ExprNode::Neg(child) => 1 + child.depth(),
            ExprNode::Bin { lhs, rhs, .. } => 1 + lhs.depth().max(rhs.depth()),
        }
    }

    pub fn tally_ops(&self, counts: &mut OpCounts) {
        match self {
            ExprNode::Atom { .. } => counts.atoms += 1,
            ExprNode::Neg(child) => {
                counts.negate += 1;
                child.tally_ops(counts);
            }
            ExprNode::Bin { op, lhs, rhs } => {
                match op {
                    BinaryOp::Add => counts.add += 1,
                    BinaryOp::Sub => counts.sub += 1,
                    BinaryOp::Mul => counts.mul += 1,
                    BinaryOp::Div => counts.div += 1,
                    BinaryOp::Pow => counts.pow += 1,
                    BinaryOp::PowNeg => counts.pow_neg += 1,
                }
                lhs.tally_ops(counts);
                rhs.tally_ops(counts);
            }
        }
    }

    /// True if the tree contains at least one binary operation; pure
    /// concatenation (a bare atom, possibly negated) does not qualify.
    pub fn has_binary_op(&self) -> bool {
        match self {
            ExprNode::Atom { .. } => false,
            ExprNode::Neg(child) => child.has_binary_op(),
            ExprNode::Bin { .. } => true,
        }
    }
}

/// Per-kind operation counts of a witness.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OpCounts {
    pub add: u32,
    pub sub: u32,
    pub mul: u32,
    pub div: u32,
    pub pow: u32,
    pub pow_neg: u32,
    pub negate: u32,
    pub atoms: u32,
}

pub fn digit_char(d: u8) -> char {
    debug_assert!(d < 36);
    if d < 10 {
        (b'0' + d) as char
    } else {
        (b'a' + d - 10) as char
    }
}

pub fn char_digit(c: char) -> Option<u8> {
    match c {
        '0'..='9' => Some(c as u8 - b'0'),
        'a'..='z' => Some(c as u8 - b'a' + 10),
        _ => None,
    }
}

/// Positional base-b value of a digit run.
pub fn numeral_value(digits: &[u8], base: u8) -> BigInt {
    let mut v = BigInt::from(0);
    for &d in digits {
        v = v * base + d;
    }
    v
}

// Production levels used when printing: 0 expression, 1 term, 2 power,
// 3 primary.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    /// The operand starts at the textual beginning of an expression (top
    /// level, right after '(' or after a leading '-'), where a bare '-'
    /// would bind as expression-level negation.
    Head,
    /// Exponent position, where a bare '-' would bind as the pow-neg marker.
    Exponent,
    Plain,
}

/// Minimal-parentheses rendering; re-parsing the output yields a
/// structurally identical tree.
pub fn format_witness(node: &ExprNode) -> String {
    let mut out = String::new();
    fmt_node(node, 0, Ctx::Head, &mut out);
    out
}

fn fmt_node(node: &ExprNode, level: u8, ctx: Ctx, out: &mut String) {
    match node {
        ExprNode::Atom { digits } => {
            for &d in digits {
                out.push(digit_char(d));
            }
        }
        ExprNode::Neg(child) => match ctx {
            Ctx::Head if level == 0 => {
                out.push('-');
                fmt_node(child, 1, Ctx::Plain, out);
            }
            Ctx::Head => {
                // valid '-' position, but the surrounding operator binds
                // tighter than expression-level negation
                out.push_str("(-");
                fmt_node(child, 1, Ctx::Plain, out);
                out.push(')');
            }
            Ctx::Exponent => {
                out.push_str("(-");
                fmt_node(child, 1, Ctx::Plain, out);
                out.push(')');
            }
            Ctx::Plain => {
                out.push_str("-(");
                fmt_node(child, 0, Ctx::Head, out);
                out.push(')');
            }
        },
        ExprNode::Bin { op, lhs, rhs } => {
            let own = match op {
                BinaryOp::Add | BinaryOp::Sub => 0,
                BinaryOp::Mul | BinaryOp::Div => 1,
                BinaryOp::Pow | BinaryOp::PowNeg => 2,
            };
            if level > own {
                out.push('(');
                fmt_bin(*op, own, lhs, rhs, Ctx::Head, out);
                out.push(')');
            } else {
                fmt_bin(*op, own, lhs, rhs, ctx, out);
            }
        }
    }
}

fn fmt_bin(op: BinaryOp, own: u8, lhs: &ExprNode, rhs: &ExprNode, ctx: Ctx, out: &mut String) {
    match op {
        BinaryOp::Add | BinaryOp::Sub | BinaryOp::Mul | BinaryOp::Div => {
            // left operand keeps the chain level and inherits the textual
            // head position; the right operand must bind one level tighter
            fmt_node(lhs, own, ctx, out);
            out.push_str(op.token());
            fmt_node(rhs, own + 1, Ctx::Plain, out);
        }
        BinaryOp::Pow | BinaryOp::PowNeg => {
            fmt_node(lhs, 3, ctx, out);
            out.push_str(op.token());
            fmt_node(rhs, 2, Ctx::Exponent, out);
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character '{ch}' at position {pos}")]
    UnexpectedChar { pos: usize, ch: char },
    #[error("unexpected end of input at position {pos}")]
    UnexpectedEnd { pos: usize },
    #[error("digit '{ch}' at position {pos} is not valid in base {base}")]
    DigitOutOfRange { pos: usize, ch: char, base: u8 },
    #[error("trailing input at position {pos}")]
    TrailingInput { pos: usize },
    #[error("empty input")]
    Empty,
}

pub fn parse_witness(text: &str, base: u8) -> Result<Rc<ExprNode>, ParseError> {
    if text.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        base,
    };
    let node = p.expression()?;
    if p.pos != p.bytes.len() {
        return Err(ParseError::TrailingInput { pos: p.pos });
    }
    Ok(node)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    base: u8,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expression(&mut self) -> Result<Rc<ExprNode>, ParseError> {
        let negated = self.eat(b'-');
        let mut lhs = self.term()?;
        if negated {
            lhs = ExprNode::neg(lhs);
        }
        loop {
            let op = match self.peek() {
                Some(b'+') => BinaryOp::Add,
                Some(b'-') => BinaryOp::Sub,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = ExprNode::bin(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Rc<ExprNode>, ParseError> {
        let mut lhs = self.power()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinaryOp::Mul,
                Some(b'/') => BinaryOp::Div,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.power()?;
            lhs = ExprNode::bin(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Rc<ExprNode>, ParseError> {
        let base = self.primary()?;
        if self.eat(b'^') {
            let op = if self.eat(b'-') {
                BinaryOp::PowNeg
            } else {
                BinaryOp::Pow
            };
            let exponent = self.power()?;
            return Ok(ExprNode::bin(op, base, exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Rc<ExprNode>, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expression()?;
                if !self.eat(b')') {
                    return match self.peek() {
                        Some(ch) => Err(ParseError::UnexpectedChar {
                            pos: self.pos,
                            ch: ch as char,
                        }),
                        None => Err(ParseError::UnexpectedEnd { pos: self.pos }),
                    };
                }
                Ok(inner)
            }
            Some(b'-') => {
                self.pos += 1;
                if !self.eat(b'(') {
                    return match self.peek() {
                        Some(ch) => Err(ParseError::UnexpectedChar {
                            pos: self.pos,
                            ch: ch as char,
                        }),
                        None => Err(ParseError::UnexpectedEnd { pos: self.pos }),
                    };
                }
                let inner = self.expression()?;
                if !self.eat(b')') {
                    return match self.peek() {
                        Some(ch) => Err(ParseError::UnexpectedChar {
                            pos: self.pos,
                            ch: ch as char,
                        }),
                        None => Err(ParseError::UnexpectedEnd { pos: self.pos }),
                    };
                }
                Ok(ExprNode::neg(inner))
            }
            Some(_) => self.atom(),
            None => Err(ParseError::UnexpectedEnd { pos: self.pos }),
        }
    }

    fn atom(&mut self) -> Result<Rc<ExprNode>, ParseError> {
        let start = self.pos;
        let mut digits = Vec::new();
        while let Some(b) = self.peek() {
            let ch = b as char;
            match char_digit(ch) {
                Some(d) if d < self.base => {
                    digits.push(d);
                    self.pos += 1;
                }
                Some(_) => {
                    return Err(ParseError::DigitOutOfRange {
                        pos: self.pos,
                        ch,
                        base: self.base,
                    })
                }
                None => break,
            }
        }
        if digits.is_empty() {
            return match self.peek() {
                Some(ch) => Err(ParseError::UnexpectedChar {
                    pos: start,
                    ch: ch as char,
                }),
                None => Err(ParseError::UnexpectedEnd { pos: start }),
            };
        }
        Ok(ExprNode::atom(digits))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessEvalError {
    #[error("witness is undefined: {reason}")]
    Undefined { reason: &'static str, exclusion: Exclusion },
}

impl WitnessEvalError {
    fn from_exclusion(e: Exclusion) -> Self {
        WitnessEvalError::Undefined {
            reason: e.describe(),
            exclusion: e,
        }
    }
}

pub fn eval_witness(
    node: &ExprNode,
    base: u8,
    caps: &EvalCaps,
) -> Result<ExactValue, WitnessEvalError> {
    eval_witness_with(node, base, caps, ExponentPolicy::IntegerOnly)
}

pub fn eval_witness_with(
    node: &ExprNode,
    base: u8,
    caps: &EvalCaps,
    policy: ExponentPolicy,
) -> Result<ExactValue, WitnessEvalError> {
    match node {
        ExprNode::Atom { digits } => Ok(ExactValue::integer(numeral_value(digits, base))),
        ExprNode::Neg(child) => Ok(eval_witness_with(child, base, caps, policy)?.neg()),
        ExprNode::Bin { op, lhs, rhs } => {
            let l = eval_witness_with(lhs, base, caps, policy)?;
            let r = eval_witness_with(rhs, base, caps, policy)?;
            match apply_binary_with(*op, &l, &r, caps, policy) {
                EvalOutcome::Value(v) => Ok(v),
                EvalOutcome::Excluded(e) => Err(WitnessEvalError::from_exclusion(e)),
            }
        }
    }
}

impl fmt::Display for ExprNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_witness(self))
    }
}
