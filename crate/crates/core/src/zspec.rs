//! The coefficient rule `z_n`, written as a polynomial in the step index `n`
//! and the current term `x`.
//!
//! Grammar, with `^` binding tighter than `*`, which binds tighter than `+`:
//!
//! ```text
//! expr := prod ('+' prod)*
//! prod := pow ('*' pow)*
//! pow  := atom ('^' integer)*
//! atom := integer | 'n' | 'x' | '(' expr ')'
//! ```
//!
//! Exponents must be integer literals. Whitespace between tokens is ignored.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{Pow, Zero};

use crate::error::{Error, ParseError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ZExpr {
    Lit(BigUint),
    /// The step index `n`.
    N,
    /// The current term `x_n`.
    X,
    Add(Box<ZExpr>, Box<ZExpr>),
    Mul(Box<ZExpr>, Box<ZExpr>),
    Pow(Box<ZExpr>, u32),
}

pub fn parse_zspec(src: &str) -> Result<ZExpr, ParseError> {
    let mut p = Parser {
        src,
        tokens: tokenize(src)?,
        pos: 0,
    };
    let expr = p.expr()?;
    match p.peek() {
        None => Ok(expr),
        Some(t) => Err(ParseError::new(t.pos, format!("unexpected {}", t.kind))),
    }
}

/// Evaluates the rule at step `n` with current term `x`.
///
/// The grammar has no subtraction, so the only invalid outcome is zero.
pub fn eval_z(e: &ZExpr, n: usize, x: &BigUint) -> Result<BigUint> {
    let z = e.eval(&BigUint::from(n), x);
    if z.is_zero() {
        Err(Error::NonPositiveZ { step: n })
    } else {
        Ok(z)
    }
}

impl ZExpr {
    fn eval(&self, n: &BigUint, x: &BigUint) -> BigUint {
        match self {
            ZExpr::Lit(v) => v.clone(),
            ZExpr::N => n.clone(),
            ZExpr::X => x.clone(),
            ZExpr::Add(a, b) => a.eval(n, x) + b.eval(n, x),
            ZExpr::Mul(a, b) => a.eval(n, x) * b.eval(n, x),
            ZExpr::Pow(a, e) => Pow::pow(a.eval(n, x), *e),
        }
    }

    /// Upper bound on the bit length of the value for operands of the given
    /// bit lengths. Saturates instead of overflowing.
    pub fn bit_bound(&self, n_bits: u64, x_bits: u64) -> u64 {
        match self {
            ZExpr::Lit(v) => v.bits(),
            ZExpr::N => n_bits,
            ZExpr::X => x_bits,
            ZExpr::Add(a, b) => a
                .bit_bound(n_bits, x_bits)
                .max(b.bit_bound(n_bits, x_bits))
                .saturating_add(1),
            ZExpr::Mul(a, b) => a
                .bit_bound(n_bits, x_bits)
                .saturating_add(b.bit_bound(n_bits, x_bits)),
            ZExpr::Pow(a, e) => a.bit_bound(n_bits, x_bits).saturating_mul(u64::from(*e)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            ZExpr::Add(..) => 1,
            ZExpr::Mul(..) => 2,
            ZExpr::Pow(..) => 3,
            _ => 4,
        }
    }
}

impl FromStr for ZExpr {
    type Err = ParseError;

    fn from_str(src: &str) -> Result<Self, ParseError> {
        parse_zspec(src)
    }
}

/// Prints with the minimum parentheses needed to re-parse to the same tree.
impl fmt::Display for ZExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // `min` is the lowest precedence a child may have without parentheses.
        fn child(f: &mut fmt::Formatter<'_>, e: &ZExpr, min: u8) -> fmt::Result {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            ZExpr::Lit(v) => write!(f, "{v}"),
            ZExpr::N => f.write_str("n"),
            ZExpr::X => f.write_str("x"),
            ZExpr::Add(a, b) => {
                child(f, a, 1)?;
                f.write_str(" + ")?;
                child(f, b, 2)
            }
            ZExpr::Mul(a, b) => {
                child(f, a, 2)?;
                f.write_str("*")?;
                child(f, b, 3)
            }
            ZExpr::Pow(a, e) => {
                child(f, a, 3)?;
                write!(f, "^{e}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum TokenKind {
    Int(BigUint),
    Ident(String),
    Plus,
    Star,
    Caret,
    LParen,
    RParen,
    Other(char),
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Int(v) => write!(f, "integer {v}"),
            TokenKind::Ident(s) => write!(f, "identifier '{s}'"),
            TokenKind::Plus => f.write_str("'+'"),
            TokenKind::Star => f.write_str("'*'"),
            TokenKind::Caret => f.write_str("'^'"),
            TokenKind::LParen => f.write_str("'('"),
            TokenKind::RParen => f.write_str("')'"),
            TokenKind::Other(c) => write!(f, "character '{c}'"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: TokenKind,
    pos: usize,
}

fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let kind = if c.is_ascii_digit() {
            let mut end = pos;
            while let Some(&(i, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = i + 1;
                chars.next();
            }
            TokenKind::Int(src[pos..end].parse().expect("ascii digits"))
        } else if c.is_alphabetic() || c == '_' {
            let mut end = pos;
            while let Some(&(i, d)) = chars.peek() {
                if !(d.is_alphanumeric() || d == '_') {
                    break;
                }
                end = i + d.len_utf8();
                chars.next();
            }
            TokenKind::Ident(src[pos..end].to_owned())
        } else {
            chars.next();
            match c {
                '+' => TokenKind::Plus,
                '*' => TokenKind::Star,
                '^' => TokenKind::Caret,
                '(' => TokenKind::LParen,
                ')' => TokenKind::RParen,
                '-' => {
                    return Err(ParseError::new(
                        pos,
                        "negative values and subtraction are not allowed",
                    ))
                }
                other => TokenKind::Other(other),
            }
        };
        tokens.push(Token { kind, pos });
    }
    Ok(tokens)
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek().is_some_and(|t| &t.kind == kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn end_error(&self, what: &str) -> ParseError {
        ParseError::new(
            self.src.len(),
            format!("expected {what}, found end of input"),
        )
    }

    fn expr(&mut self) -> Result<ZExpr, ParseError> {
        let mut lhs = self.prod()?;
        while self.eat(&TokenKind::Plus) {
            let rhs = self.prod()?;
            lhs = ZExpr::Add(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn prod(&mut self) -> Result<ZExpr, ParseError> {
        let mut lhs = self.pow()?;
        while self.eat(&TokenKind::Star) {
            let rhs = self.pow()?;
            lhs = ZExpr::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn pow(&mut self) -> Result<ZExpr, ParseError> {
        let mut base = self.atom()?;
        while self.eat(&TokenKind::Caret) {
            let t = self
                .bump()
                .ok_or_else(|| self.end_error("integer exponent"))?;
            let exp = match t.kind {
                TokenKind::Int(v) => u32::try_from(&v)
                    .map_err(|_| ParseError::new(t.pos, format!("exponent {v} is too large")))?,
                other => {
                    return Err(ParseError::new(
                        t.pos,
                        format!("exponent must be an integer literal, found {other}"),
                    ))
                }
            };
            base = ZExpr::Pow(Box::new(base), exp);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ZExpr, ParseError> {
        let t = self.bump().ok_or_else(|| self.end_error("a term"))?;
        match t.kind {
            TokenKind::Int(v) => Ok(ZExpr::Lit(v)),
            TokenKind::Ident(name) => match name.as_str() {
                "n" => Ok(ZExpr::N),
                "x" => Ok(ZExpr::X),
                _ => Err(ParseError::new(
                    t.pos,
                    format!("unknown identifier '{name}'"),
                )),
            },
            TokenKind::LParen => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Token {
                        kind: TokenKind::RParen,
                        ..
                    }) => Ok(inner),
                    Some(t) => Err(ParseError::new(
                        t.pos,
                        format!("expected ')', found {}", t.kind),
                    )),
                    None => Err(self.end_error("')'")),
                }
            }
            other => Err(ParseError::new(
                t.pos,
                format!("expected a term, found {other}"),
            )),
        }
    }
}
