//! Parser for polynomial expressions in `E2, E4, E6`.
//!
//! Grammar (whitespace ignored):
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'E2' | 'E4' | 'E6' | '(' expr ')'
//! ```
//! Division is only by nonzero constants.

use super::poly::{Generator, QmPoly};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Longest accepted expression, in bytes.
pub const MAX_INPUT: usize = 4096;
const MAX_DEPTH: usize = 64;
const MAX_EXPONENT: u32 = 64;
const MAX_TERMS: usize = 20_000;
/// Longest accepted integer literal, in decimal digits.
pub const MAX_LITERAL_DIGITS: usize = 400;

pub fn parse_poly(input: &str) -> Result<QmPoly> {
    if input.len() > MAX_INPUT {
        return Err(Error::Parse(format!("expression longer than {MAX_INPUT} bytes")));
    }
    let mut p = Parser { bytes: input.as_bytes(), pos: 0, depth: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    depth: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn check_size(&self, p: QmPoly) -> Result<QmPoly> {
        if p.num_terms() > MAX_TERMS {
            return Err(self.error("expression expands to too many terms"));
        }
        Ok(p)
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<QmPoly> {
        self.enter()?;
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { acc.add(&rhs) } else { acc.sub(&rhs) };
            acc = self.check_size(acc)?;
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<QmPoly> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            if c == b'*' {
                if acc.num_terms().saturating_mul(rhs.num_terms()) > MAX_TERMS {
                    return Err(self.error("expression expands to too many terms"));
                }
                acc = self.check_size(acc.mul(&rhs))?;
            } else {
                let d = rhs
                    .as_constant()
                    .ok_or_else(|| self.error("division by a non-constant"))?;
                if num_traits::Zero::is_zero(&d) {
                    return Err(self.error("division by zero"));
                }
                acc = acc.scale(&d.recip());
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<QmPoly> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.enter()?;
                let v = self.unary()?;
                self.depth -= 1;
                Ok(v.scale(&-Rational::from_integer(1.into())))
            }
            Some(b'+') => {
                self.pos += 1;
                self.enter()?;
                let v = self.unary();
                self.depth -= 1;
                v
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<QmPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer_literal()?;
            let e: u32 = e
                .parse()
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or_else(|| self.error("exponent too large"))?;
            if e > 1 && (base.degree() as u64) * (e as u64) > 4 * MAX_EXPONENT as u64 {
                return Err(self.error("power degree too large"));
            }
            let mut acc = QmPoly::one();
            for _ in 0..e {
                if acc.num_terms().saturating_mul(base.num_terms()) > MAX_TERMS {
                    return Err(self.error("expression expands to too many terms"));
                }
                acc = self.check_size(acc.mul(&base))?;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn integer_literal(&mut self) -> Result<String> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected an integer"));
        }
        if self.pos - start > MAX_LITERAL_DIGITS {
            return Err(self.error("integer literal too long"));
        }
        Ok(String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned())
    }

    fn atom(&mut self) -> Result<QmPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'E' | b'e') => {
                self.pos += 1;
                let g = match self.bytes.get(self.pos) {
                    Some(b'2') => Generator::E2,
                    Some(b'4') => Generator::E4,
                    Some(b'6') => Generator::E6,
                    _ => return Err(self.error("expected E2, E4 or E6")),
                };
                self.pos += 1;
                if self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_alphanumeric()) {
                    return Err(self.error("unknown symbol"));
                }
                Ok(QmPoly::generator(g))
            }
            Some(b) if b.is_ascii_digit() => {
                let lit = self.integer_literal()?;
                let v: num_bigint::BigInt = lit.parse().map_err(|_| self.error("bad integer"))?;
                Ok(QmPoly::constant(Rational::from_integer(v)))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
