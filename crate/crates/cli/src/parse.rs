//! Parser for separated polynomial expressions such as `x2^2 - x1^3 - x1 - 1`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use ppcount::{PrimePowerCtx, SeparatedCurve};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("term at byte {offset} mixes x1 and x2; only separated polynomials g(x1) + h(x2) are supported")]
    NotSeparated { offset: usize },
    #[error("unknown variable `{name}` at byte {offset} (expected x1, x2, x or y)")]
    UnknownVariable { name: String, offset: usize },
}

/// A parsed separated polynomial: integer coefficient lists for `x1` (carrying
/// the constant term) and `x2` (constant slot always zero).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolyExpr {
    pub g: Vec<BigInt>,
    pub h: Vec<BigInt>,
}

impl PolyExpr {
    fn add_term(&mut self, var: Option<Var>, exp: usize, c: BigInt) {
        let target = match var {
            Some(Var::X2) if exp > 0 => &mut self.h,
            _ => &mut self.g,
        };
        if target.len() <= exp {
            target.resize(exp + 1, BigInt::zero());
        }
        target[exp] += c;
    }

    fn trim(&mut self) {
        for v in [&mut self.g, &mut self.h] {
            while v.last().is_some_and(|c| c.is_zero()) {
                v.pop();
            }
        }
    }

    /// Total degree of the integer polynomial.
    pub fn degree(&self) -> usize {
        self.g.len().max(self.h.len()).saturating_sub(1)
    }

    pub fn to_curve(&self, ctx: &PrimePowerCtx) -> SeparatedCurve {
        SeparatedCurve::from_ints(&self.g, &self.h, ctx)
    }
}

impl fmt::Display for PolyExpr {
    /// `x1` terms by descending degree, then `x2` terms, then the constant.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(&BigInt, &str, usize)> = Vec::new();
        for (i, c) in self.g.iter().enumerate().skip(1).rev() {
            terms.push((c, "x1", i));
        }
        for (i, c) in self.h.iter().enumerate().skip(1).rev() {
            terms.push((c, "x2", i));
        }
        if let Some(c) = self.g.first() {
            terms.push((c, "", 0));
        }
        let mut first = true;
        for (c, var, e) in terms {
            if c.is_zero() {
                continue;
            }
            let neg = c < &BigInt::zero();
            let mag = c.magnitude();
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            if e == 0 {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            f.write_str(var)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    X1,
    X2,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn syntax<T>(&self, offset: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset,
            message: message.into(),
        })
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..]
            .bytes()
            .take_while(|b| b.is_ascii_digit())
            .count();
        self.pos += len;
        (len > 0).then(|| &self.src[start..start + len])
    }

    fn ident(&mut self) -> Option<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let first = rest.chars().next()?;
        if !(first.is_ascii_alphabetic() || first == '_') {
            return None;
        }
        let len = rest
            .bytes()
            .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
            .count();
        self.pos += len;
        Some((start, &rest[..len]))
    }

    fn var(&mut self) -> Result<Option<(usize, Var)>, ParseError> {
        let Some((offset, name)) = self.ident() else {
            return Ok(None);
        };
        let v = match name {
            "x1" | "x" => Var::X1,
            "x2" | "y" => Var::X2,
            _ => {
                return Err(ParseError::UnknownVariable {
                    name: name.to_string(),
                    offset,
                })
            }
        };
        Ok(Some((offset, v)))
    }

    fn exponent(&mut self) -> Result<usize, ParseError> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        let at = {
            self.skip_ws();
            self.pos
        };
        match self.digits() {
            Some(d) => d
                .parse::<usize>()
                .ok()
                .filter(|&e| e <= 1 << 16)
                .map_or_else(|| self.syntax(at, "exponent too large"), Ok),
            None => self.syntax(at, "expected a non-negative integer exponent after '^'"),
        }
    }

    /// One term with its sign already consumed.
    fn term(&mut self, sign: BigInt, out: &mut PolyExpr) -> Result<(), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let coeff = self.digits().map(|d| d.parse::<BigInt>().expect("digit string"));
        let has_coeff = coeff.is_some();
        let mut c = sign * coeff.unwrap_or_else(BigInt::one);
        let mut seen: Option<Var> = None;
        let mut exp = 0usize;
        loop {
            let star = self.peek() == Some('*');
            if star {
                self.pos += 1;
            }
            let before = {
                self.skip_ws();
                self.pos
            };
            match self.var()? {
                Some((offset, v)) => {
                    match seen {
                        Some(prev) if prev != v => return Err(ParseError::NotSeparated { offset: start }),
                        Some(_) => return self.syntax(offset, "variable repeated within a term"),
                        None => {}
                    }
                    seen = Some(v);
                    exp = self.exponent()?;
                }
                None if star => {
                    // a second numeric factor, e.g. `2*3*x`
                    match self.digits() {
                        Some(d) if seen.is_none() => c *= d.parse::<BigInt>().expect("digit string"),
                        _ => return self.syntax(before, "expected a variable after '*'"),
                    }
                }
                None if !has_coeff && seen.is_none() => {
                    return self.syntax(before, "expected a coefficient or a variable");
                }
                None => break,
            }
        }
        out.add_term(seen, exp, c);
        Ok(())
    }
}

pub fn parse_poly(text: &str) -> Result<PolyExpr, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let mut out = PolyExpr::default();
    let mut sign = BigInt::one();
    match p.peek() {
        Some('-') => {
            sign = -sign;
            p.pos += 1;
        }
        Some('+') => p.pos += 1,
        None => return p.syntax(0, "empty expression"),
        _ => {}
    }
    loop {
        p.term(sign, &mut out)?;
        match p.peek() {
            None => break,
            Some('+') => sign = BigInt::one(),
            Some('-') => sign = -BigInt::one(),
            Some(c) => return p.syntax(p.pos, format!("unexpected character `{c}`")),
        }
        p.pos += 1;
    }
    out.trim();
    Ok(out)
}
