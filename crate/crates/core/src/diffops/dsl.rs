//! Text form of [`PolyDiffOp`].
//!
//! ```text
//! op      := "0" | sign? term (("+" | "-") term)*
//! term    := factor ("*" factor)*          at most one derivative, last
//! factor  := coeff_atom | deriv
//! deriv   := "d" ("x" | "y" | "z")+        e.g. dx, dzz, dzy
//! coeff   := sign? cterm (("+" | "-") cterm)*
//! cterm   := coeff_atom ("*" coeff_atom)*
//! coeff_atom := int ("/" int)? | "i" | var ("^" int)? | "(" coeff ")"
//! var     := "x" | "y" | "z"
//! ```
//!
//! The canonical form prints one term per real or imaginary part of each
//! monomial coefficient, as `(c[*i][*x^a][*y^b][*z^c])[*d…]`, joined by
//! `" + "`. Parsing the canonical form gives back the same operator.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::Zero;

use super::op::{PolyDiffOp, MAX_ORDER};
use super::poly::{Exp, GRat, Poly, VAR_NAMES, X, Y, Z};
use super::DiffOpError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Star,
    Plus,
    Minus,
    Caret,
    Slash,
    Num(i64),
    Ident(String),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, DiffOpError> {
    let mut out = Vec::new();
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        let start = i;
        let tok = match c {
            ' ' | '\t' | '\n' => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '*' => Tok::Star,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '0'..='9' => {
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                let n = s[start..i]
                    .parse()
                    .map_err(|_| parse_err(start, "integer out of range"))?;
                out.push((start, Tok::Num(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < b.len() && b[i].is_ascii_alphabetic() {
                    i += 1;
                }
                out.push((start, Tok::Ident(s[start..i].to_string())));
                continue;
            }
            _ => return Err(parse_err(start, &format!("unexpected character {c:?}"))),
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

fn parse_err(pos: usize, msg: &str) -> DiffOpError {
    DiffOpError::Parse {
        pos,
        msg: msg.to_string(),
    }
}

fn var_index(name: &str) -> Option<usize> {
    match name {
        "z" => Some(Z),
        "y" => Some(Y),
        "x" => Some(X),
        _ => None,
    }
}

fn deriv_index(name: &str) -> Option<Exp> {
    let rest = name.strip_prefix('d')?;
    if rest.is_empty() {
        return None;
    }
    let mut alpha = [0u8; 3];
    for ch in rest.chars() {
        alpha[var_index(&ch.to_string())?] += 1;
    }
    Some(alpha)
}

enum Factor {
    Coeff(Poly),
    Deriv(Exp),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<Rational64, DiffOpError> {
        let pos = self.pos();
        let Some(Tok::Num(n)) = self.peek().cloned() else {
            return Err(parse_err(pos, "expected an integer"));
        };
        self.at += 1;
        if self.eat(&Tok::Slash) {
            let dpos = self.pos();
            let Some(Tok::Num(d)) = self.peek().cloned() else {
                return Err(parse_err(dpos, "expected a denominator"));
            };
            self.at += 1;
            if d == 0 {
                return Err(parse_err(dpos, "zero denominator"));
            }
            return Ok(Rational64::new(n, d));
        }
        Ok(Rational64::from_integer(n))
    }

    fn factor(&mut self, allow_deriv: bool) -> Result<Factor, DiffOpError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(_)) => Ok(Factor::Coeff(Poly::constant(GRat::new(
                self.number()?,
                Rational64::zero(),
            )))),
            Some(Tok::LParen) => {
                self.at += 1;
                let p = self.coeff_sum()?;
                if !self.eat(&Tok::RParen) {
                    return Err(parse_err(self.pos(), "expected ')'"));
                }
                Ok(Factor::Coeff(p))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if name == "i" {
                    return Ok(Factor::Coeff(Poly::constant(GRat::i())));
                }
                if let Some(v) = var_index(&name) {
                    let mut k = 1;
                    if self.eat(&Tok::Caret) {
                        let epos = self.pos();
                        let Some(Tok::Num(n)) = self.peek().cloned() else {
                            return Err(parse_err(epos, "expected an exponent"));
                        };
                        self.at += 1;
                        k = u32::try_from(n)
                            .map_err(|_| parse_err(epos, "exponent out of range"))?;
                    }
                    return Ok(Factor::Coeff(Poly::var(v).pow(k)));
                }
                match deriv_index(&name) {
                    Some(alpha) if allow_deriv => {
                        if alpha.iter().sum::<u8>() > MAX_ORDER {
                            return Err(parse_err(pos, "derivative order above 4"));
                        }
                        Ok(Factor::Deriv(alpha))
                    }
                    Some(_) => Err(parse_err(pos, "derivative inside a coefficient")),
                    None => Err(parse_err(pos, &format!("unknown name {name:?}"))),
                }
            }
            _ => Err(parse_err(pos, "expected a factor")),
        }
    }

    fn coeff_term(&mut self) -> Result<Poly, DiffOpError> {
        let mut p = Poly::one();
        loop {
            match self.factor(false)? {
                Factor::Coeff(q) => p = &p * &q,
                Factor::Deriv(_) => unreachable!("derivatives rejected in coefficients"),
            }
            if !self.eat(&Tok::Star) {
                return Ok(p);
            }
        }
    }

    fn coeff_sum(&mut self) -> Result<Poly, DiffOpError> {
        let mut sign = if self.eat(&Tok::Minus) { -1 } else { 1 };
        let mut sum = Poly::zero();
        loop {
            let t = self.coeff_term()?;
            sum = if sign < 0 { &sum - &t } else { &sum + &t };
            sign = match self.peek() {
                Some(Tok::Plus) => 1,
                Some(Tok::Minus) => -1,
                _ => return Ok(sum),
            };
            self.at += 1;
        }
    }

    fn op_term(&mut self) -> Result<PolyDiffOp, DiffOpError> {
        let mut coeff = Poly::one();
        let mut alpha = [0u8; 3];
        loop {
            match self.factor(true)? {
                Factor::Coeff(q) => coeff = &coeff * &q,
                Factor::Deriv(a) => {
                    alpha = a;
                    if self.peek() == Some(&Tok::Star) {
                        return Err(parse_err(
                            self.pos(),
                            "the derivative must be the last factor",
                        ));
                    }
                    break;
                }
            }
            if !self.eat(&Tok::Star) {
                break;
            }
        }
        Ok(PolyDiffOp::term(coeff, alpha))
    }

    fn op_sum(&mut self) -> Result<PolyDiffOp, DiffOpError> {
        let mut sign = if self.eat(&Tok::Minus) { -1 } else { 1 };
        let mut sum = PolyDiffOp::zero();
        loop {
            let t = self.op_term()?;
            sum = if sign < 0 { &sum - &t } else { &sum + &t };
            sign = match self.peek() {
                Some(Tok::Plus) => 1,
                Some(Tok::Minus) => -1,
                None => return Ok(sum),
                _ => return Err(parse_err(self.pos(), "expected '+', '-' or end of input")),
            };
            self.at += 1;
        }
    }
}

impl FromStr for PolyDiffOp {
    type Err = DiffOpError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let toks = tokenize(s)?;
        if toks.is_empty() {
            return Err(parse_err(0, "empty operator"));
        }
        let mut p = Parser {
            toks,
            at: 0,
            len: s.len(),
        };
        p.op_sum()
    }
}

fn write_term(
    f: &mut fmt::Formatter<'_>,
    c: &Rational64,
    imag: bool,
    e: &Exp,
    alpha: &Exp,
) -> fmt::Result {
    write!(f, "({c}")?;
    if imag {
        write!(f, "*i")?;
    }
    for v in [X, Y, Z] {
        match e[v] {
            0 => {}
            1 => write!(f, "*{}", VAR_NAMES[v])?,
            k => write!(f, "*{}^{k}", VAR_NAMES[v])?,
        }
    }
    write!(f, ")")?;
    if alpha.iter().any(|&a| a > 0) {
        write!(f, "*d")?;
        for v in [X, Y, Z] {
            for _ in 0..alpha[v] {
                write!(f, "{}", VAR_NAMES[v])?;
            }
        }
    }
    Ok(())
}

impl fmt::Display for PolyDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (alpha, poly) in self.terms() {
            for (e, c) in poly.terms() {
                for (part, imag) in [(&c.re, false), (&c.im, true)] {
                    if part.is_zero() {
                        continue;
                    }
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    write_term(f, part, imag, e, alpha)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            for (part, imag) in [(&c.re, false), (&c.im, true)] {
                if part.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write_term(f, part, imag, e, &[0, 0, 0])?;
            }
        }
        Ok(())
    }
}
