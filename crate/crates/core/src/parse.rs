//! Recursive-descent parser for polynomial expressions in X_1..X_m and Z.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*'? factor)*
//! factor := ('+'|'-') factor | base ('^' uint)?
//! base   := var | rational | '(' expr ')'
//! var    := 'Z' | 'X' ['_'] uint | 'X' | 'Y'
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::EquationError;
use crate::field::Field;
use crate::poly::Poly;

const MAX_EXPONENT: u32 = 4096;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Var(Var),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Var {
    Z,
    /// `X` or `Y`, mapped to X_1 or X_2.
    Alias(usize),
    /// `X<j>`, 1-based in the source, stored 0-based.
    Indexed(usize),
}

fn syntax(position: usize, message: impl Into<String>) -> EquationError {
    EquationError::Syntax { position, message: message.into() }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, EquationError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    let digits_end = |mut p: usize| {
        while p < bytes.len() && bytes[p].is_ascii_digit() {
            p += 1;
        }
        p
    };
    while pos < bytes.len() {
        let c = bytes[pos];
        let start = pos;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                pos += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'0'..=b'9' => {
                let end = digits_end(pos);
                let num: BigInt = text[pos..end].parse().expect("digits");
                pos = end;
                let mut value = BigRational::from_integer(num);
                if pos < bytes.len() && bytes[pos] == b'/' {
                    let dstart = pos + 1;
                    let dend = digits_end(dstart);
                    if dend == dstart {
                        return Err(syntax(pos, "expected denominator after '/'"));
                    }
                    let den: BigInt = text[dstart..dend].parse().expect("digits");
                    if den == BigInt::from(0) {
                        return Err(syntax(dstart, "zero denominator"));
                    }
                    value /= BigRational::from_integer(den);
                    pos = dend;
                }
                out.push((start, Tok::Num(value)));
                continue;
            }
            b'Z' => out.push((start, Tok::Var(Var::Z))),
            b'Y' => out.push((start, Tok::Var(Var::Alias(1)))),
            b'X' => {
                let mut p = pos + 1;
                if p < bytes.len() && bytes[p] == b'_' {
                    p += 1;
                }
                let end = digits_end(p);
                if end > p {
                    let idx: usize = text[p..end]
                        .parse()
                        .map_err(|_| syntax(p, "variable index too large"))?;
                    if idx == 0 {
                        return Err(syntax(p, "variable indices start at 1"));
                    }
                    out.push((start, Tok::Var(Var::Indexed(idx - 1))));
                    pos = end;
                    continue;
                }
                if p != pos + 1 {
                    return Err(syntax(p, "expected index after 'X_'"));
                }
                out.push((start, Tok::Var(Var::Alias(0))));
            }
            c if c.is_ascii_alphabetic() => {
                let mut end = pos + 1;
                while end < bytes.len() && bytes[end].is_ascii_alphanumeric() {
                    end += 1;
                }
                return Err(EquationError::UnknownVariable(text[pos..end].to_string()));
            }
            _ => {
                let ch = text[pos..].chars().next().unwrap_or('?');
                return Err(syntax(pos, format!("unexpected character '{ch}'")));
            }
        }
        pos += 1;
    }
    Ok(out)
}

/// Infers the X-dimension from the variables used; `requested` overrides it.
fn resolve_dimension(tokens: &[(usize, Tok)], requested: Option<usize>) -> Result<usize, EquationError> {
    let mut alias_max = None::<usize>;
    let mut indexed_max = None::<usize>;
    for (_, t) in tokens {
        match t {
            Tok::Var(Var::Alias(j)) => alias_max = Some(alias_max.map_or(*j, |a| a.max(*j))),
            Tok::Var(Var::Indexed(j)) => indexed_max = Some(indexed_max.map_or(*j, |a| a.max(*j))),
            _ => {}
        }
    }
    if alias_max.is_some() && indexed_max.is_some() {
        return Err(EquationError::MixedVariables(
            "X/Y aliases cannot be combined with indexed X1..Xm".into(),
        ));
    }
    let inferred = alias_max.or(indexed_max).map_or(1, |j| j + 1);
    let m = match requested {
        Some(m) if m < inferred => {
            return Err(EquationError::Dimension(format!(
                "equation uses {inferred} X-variables but m = {m} was requested"
            )))
        }
        Some(0) => return Err(EquationError::Dimension("m must be at least 1".into())),
        Some(m) => m,
        None => inferred,
    };
    if alias_max.is_some() && m > 2 {
        return Err(EquationError::MixedVariables(
            "X/Y aliases are only available when m <= 2; use X1..Xm".into(),
        ));
    }
    Ok(m)
}

struct Parser<'a> {
    tokens: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
    field: Field,
    m: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn expr(&mut self) -> Result<Poly, EquationError> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, EquationError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Num(_)) | Some(Tok::Var(_)) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly, EquationError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                return Ok(self.factor()?.neg());
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                return self.factor();
            }
            _ => {}
        }
        let base = self.base()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let at = self.here();
            match self.peek() {
                Some(Tok::Num(r)) if r.is_integer() => {
                    self.pos += 1;
                    let e: u32 = r
                        .numer()
                        .try_into()
                        .ok()
                        .filter(|e| *e <= MAX_EXPONENT)
                        .ok_or_else(|| syntax(at, "exponent out of range"))?;
                    Ok(base.pow(e))
                }
                _ => Err(syntax(at, "expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Poly, EquationError> {
        let at = self.here();
        match self.peek() {
            Some(Tok::Num(r)) => {
                self.pos += 1;
                let c = self.field.from_rational(r)?;
                Ok(Poly::constant(self.field, self.m, c))
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(match v {
                    Var::Z => Poly::z(self.field, self.m),
                    Var::Alias(j) | Var::Indexed(j) => Poly::x(self.field, self.m, *j),
                })
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(syntax(self.here(), "expected ')'")),
                }
            }
            Some(_) => Err(syntax(at, "expected a variable, number or '('")),
            None => Err(syntax(at, "unexpected end of input")),
        }
    }
}

/// Parses and expands a polynomial expression. `m` overrides the inferred
/// number of X-variables.
pub fn parse_polynomial(text: &str, field: Field, m: Option<usize>) -> Result<Poly, EquationError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(syntax(0, "empty expression"));
    }
    let m = resolve_dimension(&tokens, m)?;
    let mut parser = Parser { tokens: &tokens, pos: 0, end: text.len(), field, m };
    let poly = parser.expr()?;
    if parser.pos != tokens.len() {
        return Err(syntax(parser.here(), "unexpected trailing input"));
    }
    Ok(poly)
}
