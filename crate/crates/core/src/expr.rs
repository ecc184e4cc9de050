//! Text syntax for polynomials and rational functions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | factor
//! factor := base ('^' natural)?
//! base   := integer | identifier | '(' expr ')'
//! ```
//!
//! Identifiers are the ring's variables and parameters. When a polynomial is
//! requested, the divisor of every `/` must be a nonzero element of the base
//! field (so `3/4*x` and `x/(c+1)` are fine, `1/x` is not).
//!
//! The printer lists terms in decreasing grevlex order and its output parses
//! back to the same value.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::poly::{FieldElement, Monomial, MonomialOrder, Polynomial, QPoly, Rational, RationalFunction, Ring};

/// A parse failure. `line` and `column` are 1-based, counted in characters.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    /// Shifts a position measured inside a fragment that starts at
    /// (`line`, `column`) of a larger text.
    pub fn offset(mut self, line: usize, column: usize) -> Self {
        if self.line == 1 {
            self.column += column - 1;
        }
        self.line += line - 1;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
}

fn lex(text: &str) -> Result<Lexer, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let s: String = chars[i..j].iter().collect();
            col += j - i;
            i = j;
            Tok::Int(s.parse().expect("digits"))
        } else if c.is_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_' || chars[j] == '\'') {
                j += 1;
            }
            let s: String = chars[i..j].iter().collect();
            col += j - i;
            i = j;
            Tok::Ident(s)
        } else {
            let t = match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => {
                    return Err(ParseError {
                        line,
                        column: col,
                        message: format!("unexpected character `{c}`"),
                    })
                }
            };
            i += 1;
            col += 1;
            t
        };
        toks.push((tok, start.0, start.1));
    }
    toks.push((Tok::End, line, col));
    Ok(Lexer { toks })
}

struct Parser<'a> {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    ring: &'a Ring,
    polynomial_only: bool,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        let (_, line, column) = &self.toks[self.pos];
        Err(ParseError {
            line: *line,
            column: *column,
            message: message.into(),
        })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> PResult<RationalFunction> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> PResult<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    let at = self.pos;
                    self.bump();
                    let rhs = self.unary()?;
                    if rhs.is_zero() {
                        self.pos = at;
                        return self.err("division by zero");
                    }
                    if self.polynomial_only && rhs.as_constant().is_none() {
                        self.pos = at;
                        return self.err("division by a non-constant where a polynomial is expected");
                    }
                    acc = acc.checked_div(&rhs).expect("nonzero divisor");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> PResult<RationalFunction> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-&self.unary()?);
        }
        self.factor()
    }

    fn factor(&mut self) -> PResult<RationalFunction> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.peek().clone() {
            Tok::Int(n) => match u32::try_from(&n) {
                Ok(k) => {
                    self.bump();
                    Ok(base.pow(k))
                }
                Err(_) => self.err("exponent too large"),
            },
            _ => self.err("expected a natural-number exponent"),
        }
    }

    fn base(&mut self) -> PResult<RationalFunction> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                let c = FieldElement::from_rational(Rational::from_integer(n));
                Ok(Polynomial::constant(self.ring, c).into())
            }
            Tok::Ident(name) => {
                let p = if let Some(i) = self.ring.var_index(&name) {
                    Polynomial::var(self.ring, i)
                } else if self.ring.param_index(&name).is_some() {
                    Polynomial::param_named(self.ring, &name).expect("known parameter")
                } else {
                    return self.err(format!("unknown identifier `{name}`"));
                };
                self.bump();
                Ok(p.into())
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.err("expected `)`");
                }
                self.bump();
                Ok(e)
            }
            Tok::End => self.err("unexpected end of expression"),
            t => self.err(format!("unexpected {}", describe(&t))),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Int(_) => "number",
        Tok::Ident(_) => "identifier",
        Tok::Plus => "`+`",
        Tok::Minus => "`-`",
        Tok::Star => "`*`",
        Tok::Slash => "`/`",
        Tok::Caret => "`^`",
        Tok::LParen => "`(`",
        Tok::RParen => "`)`",
        Tok::End => "end of input",
    }
}

fn parse(text: &str, ring: &Ring, polynomial_only: bool) -> PResult<RationalFunction> {
    let lexer = lex(text)?;
    let mut p = Parser {
        toks: lexer.toks,
        pos: 0,
        ring,
        polynomial_only,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        let t = p.peek().clone();
        return p.err(format!("unexpected {}", describe(&t)));
    }
    Ok(e)
}

pub fn parse_rational_function(text: &str, ring: &Ring) -> Result<RationalFunction, ParseError> {
    parse(text, ring, false)
}

pub fn parse_polynomial(text: &str, ring: &Ring) -> Result<Polynomial, ParseError> {
    let f = parse(text, ring, true)?;
    Ok(f.as_polynomial().expect("only constant divisors").clone())
}

/// An element of the base field: no variables may occur.
pub fn parse_field_element(text: &str, ring: &Ring) -> Result<FieldElement, ParseError> {
    let f = parse(text, ring, true)?;
    f.as_constant().ok_or_else(|| ParseError {
        line: 1,
        column: 1,
        message: "expected an element of the base field (no variables)".into(),
    })
}

fn rational_str(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn monomial_str(exps: &[u32], names: &[String]) -> String {
    let mut parts = Vec::new();
    for (e, name) in exps.iter().zip(names) {
        match e {
            0 => {}
            1 => parts.push(name.clone()),
            e => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

/// `(negative, text)` for `coeff · mono` where coeff is rational.
fn rational_term(c: &Rational, mono: &str) -> (bool, String) {
    let a = c.abs();
    let text = if mono.is_empty() {
        rational_str(&a)
    } else if a.is_one() {
        mono.to_string()
    } else {
        format!("{}*{mono}", rational_str(&a))
    };
    (c.is_negative(), text)
}

fn join_terms(terms: Vec<(bool, String)>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (neg, t)) in terms.into_iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&t);
    }
    out
}

fn grevlex_desc<'a, T>(items: impl Iterator<Item = (&'a [u32], T)>) -> Vec<(&'a [u32], T)> {
    let mut v: Vec<_> = items.collect();
    v.sort_by(|a, b| {
        MonomialOrder::GrevLex.cmp(&Monomial::from_exponents(b.0.to_vec()), &Monomial::from_exponents(a.0.to_vec()))
    });
    v
}

/// A polynomial over ℚ in the parameters.
fn qpoly_str(q: &QPoly, names: &[String]) -> String {
    let terms = grevlex_desc(q.terms().map(|(e, c)| (e.as_slice(), c)))
        .into_iter()
        .map(|(e, c)| rational_term(c, &monomial_str(e, names)))
        .collect();
    join_terms(terms)
}

fn single_term(q: &QPoly) -> Option<(&Vec<u32>, &Rational)> {
    let mut it = q.terms();
    match (it.next(), it.next()) {
        (Some(t), None) => Some(t),
        _ => None,
    }
}

/// `(negative, text)` for `c · mono` with c in the base field.
fn field_term(c: &FieldElement, mono: &str, params: &[String]) -> (bool, String) {
    if let Some(r) = c.as_rational() {
        return rational_term(r, mono);
    }
    let m = params.len();
    let num = c.numerator(m);
    let den = c.denominator(m);
    if den.is_one() {
        if let Some((e, q)) = single_term(&num) {
            let pm = monomial_str(e, params);
            let full = if mono.is_empty() { pm } else { format!("{pm}*{mono}") };
            return rational_term(q, &full);
        }
    }
    let mut text = format!("({})", qpoly_str(&num, params));
    if !den.is_one() {
        text.push_str(&format!("/({})", qpoly_str(&den, params)));
    }
    if !mono.is_empty() {
        text.push('*');
        text.push_str(mono);
    }
    (false, text)
}

/// Canonical text of a base-field element.
pub fn format_field_element(c: &FieldElement, ring: &Ring) -> String {
    join_terms(vec![field_term(c, "", ring.params())])
}

pub fn format_polynomial(p: &Polynomial) -> String {
    let ring = p.ring();
    let terms = p
        .sorted_terms(MonomialOrder::GrevLex)
        .into_iter()
        .map(|(m, c)| field_term(c, &monomial_str(m.exponents(), ring.vars()), ring.params()))
        .collect();
    join_terms(terms)
}

pub fn format_rational_function(f: &RationalFunction) -> String {
    if f.denominator().is_one() {
        return format_polynomial(f.numerator());
    }
    format!("({})/({})", format_polynomial(f.numerator()), format_polynomial(f.denominator()))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_polynomial(self))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational_function(self))
    }
}
