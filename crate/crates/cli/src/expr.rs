//! Parser for algebra expressions and scalar literals.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | atom ('^' uint)?
//! atom   := scalar | 'v' uint | 't.' name | '(' expr ')'
//! scalar := uint | uint '/' uint | 'z'
//! ```
//!
//! Juxtaposition is not multiplication; `2v1` is rejected.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use orbifold_core::{CycField, CycScalar, FreeElement, Letter, Rational, Word};
use thiserror::Error;

/// Largest exponent accepted after `^` (except on `z`, which is reduced mod N).
pub const MAX_EXPONENT: u32 = 256;
/// Largest number of terms any intermediate result may have.
pub const MAX_TERMS: usize = 10_000;
/// Longest word any intermediate result may contain.
pub const MAX_WORD_LEN: usize = 1_024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Frac(BigInt, BigInt),
    Zeta,
    /// 1-based as written.
    Var(usize),
    Group(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprErrorKind {
    #[error("unexpected character '{0}'")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected '{0}'")]
    UnexpectedToken(String),
    #[error("malformed literal: {0}")]
    MalformedLiteral(String),
    #[error("unknown symbol '{0}'")]
    UnknownSymbol(String),
    #[error("index v{index} out of range (n = {n})")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("unknown group element '{name}' (group has elements g0..g{last})")]
    UnknownGroupElement { name: String, last: usize },
    #[error("exponent {0} exceeds the limit of {MAX_EXPONENT}")]
    ExponentTooLarge(u64),
    #[error("expression too large")]
    TooLarge,
    #[error("expected a scalar, found an expression in v or t")]
    NotScalar,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at offset {offset}")]
pub struct ExprError {
    pub kind: ExprErrorKind,
    /// Byte offset into the source text.
    pub offset: usize,
}

impl ExprError {
    fn new(kind: ExprErrorKind, offset: usize) -> Self {
        ExprError { kind, offset }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Dot,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(s) | Tok::Ident(s) => f.write_str(s),
            Tok::Plus => f.write_str("+"),
            Tok::Minus => f.write_str("-"),
            Tok::Star => f.write_str("*"),
            Tok::Caret => f.write_str("^"),
            Tok::Slash => f.write_str("/"),
            Tok::Dot => f.write_str("."),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '/' => Some(Tok::Slash),
            '.' => Some(Tok::Dot),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = simple {
            chars.next();
            out.push((t, pos));
        } else if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                chars.next();
            }
            out.push((Tok::Num(s), pos));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_') {
                    break;
                }
                s.push(d);
                chars.next();
            }
            out.push((Tok::Ident(s), pos));
        } else {
            return Err(ExprError::new(ExprErrorKind::UnexpectedChar(c), pos));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn unexpected(&self) -> ExprError {
        let kind = match self.peek() {
            Some(t) => ExprErrorKind::UnexpectedToken(t.to_string()),
            None => ExprErrorKind::UnexpectedEnd,
        };
        ExprError::new(kind, self.offset())
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.next();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.next();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        if self.peek() == Some(&Tok::Minus) {
            self.next();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.next();
        let at = self.offset();
        match self.next() {
            Some(Tok::Num(s)) => {
                let e: u64 = s
                    .parse()
                    .map_err(|_| ExprError::new(ExprErrorKind::MalformedLiteral(s.clone()), at))?;
                let e = u32::try_from(e)
                    .map_err(|_| ExprError::new(ExprErrorKind::ExponentTooLarge(e), at))?;
                Ok(Expr::Pow(Box::new(base), e))
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected())
            }
        }
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let at = self.offset();
        match self.next() {
            Some(Tok::Num(p)) => {
                if self.peek() != Some(&Tok::Slash) {
                    return Ok(Expr::Int(p.parse().expect("digits")));
                }
                self.next();
                match self.next() {
                    Some(Tok::Num(d)) => {
                        let den: BigInt = d.parse().expect("digits");
                        if den.is_zero() {
                            return Err(ExprError::new(
                                ExprErrorKind::MalformedLiteral(format!("{p}/{d}")),
                                at,
                            ));
                        }
                        Ok(Expr::Frac(p.parse().expect("digits"), den))
                    }
                    _ => Err(ExprError::new(
                        ExprErrorKind::MalformedLiteral(format!("{p}/")),
                        at,
                    )),
                }
            }
            Some(Tok::Ident(name)) => self.ident(name, at),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    self.pos -= 1;
                    return Err(self.unexpected());
                }
                Ok(inner)
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected())
            }
        }
    }

    fn ident(&mut self, name: String, at: usize) -> Result<Expr, ExprError> {
        if name == "z" {
            return Ok(Expr::Zeta);
        }
        if name == "t" && self.peek() == Some(&Tok::Dot) {
            self.next();
            return match self.next() {
                Some(Tok::Ident(g)) => Ok(Expr::Group(g)),
                Some(Tok::Num(g)) => Ok(Expr::Group(g)),
                _ => Err(ExprError::new(
                    ExprErrorKind::MalformedLiteral("t.".into()),
                    at,
                )),
            };
        }
        if let Some(digits) = name.strip_prefix('v') {
            if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                let index = digits.parse().map_err(|_| {
                    ExprError::new(ExprErrorKind::MalformedLiteral(name.clone()), at)
                })?;
                return Ok(Expr::Var(index));
            }
        }
        Err(ExprError::new(ExprErrorKind::UnknownSymbol(name), at))
    }
}

pub fn parse(src: &str) -> Result<Expr, ExprError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.unexpected());
    }
    Ok(e)
}

/// What `v<i>` and `t.<name>` may refer to when lowering.
#[derive(Debug, Clone)]
pub struct Context<'a> {
    pub field: &'a CycField,
    pub n: usize,
    pub group_order: usize,
}

fn check_size(e: &FreeElement) -> Result<(), ExprErrorKind> {
    if e.len() > MAX_TERMS || e.terms().any(|(w, _)| w.len() > MAX_WORD_LEN) {
        Err(ExprErrorKind::TooLarge)
    } else {
        Ok(())
    }
}

fn product(a: &FreeElement, b: &FreeElement) -> Result<FreeElement, ExprErrorKind> {
    if a.len().saturating_mul(b.len()) > MAX_TERMS {
        return Err(ExprErrorKind::TooLarge);
    }
    let max_len = |e: &FreeElement| e.terms().map(|(w, _)| w.len()).max().unwrap_or(0);
    if max_len(a) + max_len(b) > MAX_WORD_LEN {
        return Err(ExprErrorKind::TooLarge);
    }
    Ok(a * b)
}

fn group_index(name: &str, order: usize) -> Option<usize> {
    let digits = name.strip_prefix('g')?;
    if digits.is_empty()
        || !digits.bytes().all(|b| b.is_ascii_digit())
        || (digits.len() > 1 && digits.starts_with('0'))
    {
        return None;
    }
    digits.parse().ok().filter(|&g| g < order)
}

/// Parses a group element name `g<k>` with k below `order`.
pub fn parse_group_name(name: &str, order: usize) -> Option<usize> {
    group_index(name, order)
}

/// Lowers an expression to k⟨X⟩. Errors carry offset 0; use [`parse_expr`]
/// for positioned errors.
pub fn lower(expr: &Expr, ctx: &Context<'_>) -> Result<FreeElement, ExprErrorKind> {
    let k = ctx.field;
    let out = match expr {
        Expr::Int(i) => FreeElement::scalar(k.rational(Rational::from_integer(i.clone()))),
        Expr::Frac(p, q) => FreeElement::scalar(k.rational(Rational::new(p.clone(), q.clone()))),
        Expr::Zeta => FreeElement::scalar(k.root_of_unity(1)),
        Expr::Var(i) => {
            if *i == 0 || *i > ctx.n {
                return Err(if ctx.n == 0 {
                    ExprErrorKind::NotScalar
                } else {
                    ExprErrorKind::IndexOutOfRange {
                        index: *i,
                        n: ctx.n,
                    }
                });
            }
            FreeElement::letter(Letter::V(i - 1), k)
        }
        Expr::Group(name) => {
            if ctx.group_order == 0 {
                return Err(ExprErrorKind::NotScalar);
            }
            let g = group_index(name, ctx.group_order).ok_or_else(|| {
                ExprErrorKind::UnknownGroupElement {
                    name: name.clone(),
                    last: ctx.group_order - 1,
                }
            })?;
            FreeElement::letter(Letter::T(g), k)
        }
        Expr::Neg(a) => -lower(a, ctx)?,
        Expr::Add(a, b) => lower(a, ctx)? + lower(b, ctx)?,
        Expr::Sub(a, b) => lower(a, ctx)? - lower(b, ctx)?,
        Expr::Mul(a, b) => product(&lower(a, ctx)?, &lower(b, ctx)?)?,
        Expr::Pow(base, e) => {
            if **base == Expr::Zeta {
                let e = i64::from(*e % k.order());
                return Ok(FreeElement::scalar(k.root_of_unity(e)));
            }
            if *e > MAX_EXPONENT {
                return Err(ExprErrorKind::ExponentTooLarge(u64::from(*e)));
            }
            let b = lower(base, ctx)?;
            let mut acc = FreeElement::scalar(k.one());
            for _ in 0..*e {
                acc = product(&acc, &b)?;
            }
            acc
        }
    };
    check_size(&out)?;
    Ok(out)
}

/// Parses and lowers an expression in v_1..v_n and t_g.
pub fn parse_expr(src: &str, ctx: &Context<'_>) -> Result<FreeElement, ExprError> {
    let e = parse(src)?;
    lower(&e, ctx).map_err(|kind| ExprError::new(kind, 0))
}

/// Parses a scalar literal such as `1/2*z^3 - 2`.
pub fn parse_scalar(src: &str, field: &CycField) -> Result<CycScalar, ExprError> {
    let ctx = Context {
        field,
        n: 0,
        group_order: 0,
    };
    let e = parse_expr(src, &ctx)?;
    let mut terms = e.terms();
    match (terms.next(), terms.next()) {
        (None, _) => Ok(field.zero()),
        (Some((w, c)), None) if w.is_empty() => Ok(c.clone()),
        _ => Err(ExprError::new(ExprErrorKind::NotScalar, 0)),
    }
}

/// The word and coefficient of a single-term element, if it is one.
pub fn single_term(e: &FreeElement) -> Option<(&Word, &CycScalar)> {
    let mut it = e.terms();
    match (it.next(), it.next()) {
        (Some(t), None) => Some(t),
        _ => None,
    }
}
