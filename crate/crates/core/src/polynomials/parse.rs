//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := sign? term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := coeff | var ('^' uint)? | '(' expr ')'
//! coeff  := int ('/' uint)?
//! ```
//!
//! A leading sign on an expression is accepted so printed polynomials parse back.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::polynomials::{PolyError, Polynomial, RingRef};

pub fn parse_polynomial(text: &str, ring: &RingRef) -> Result<Polynomial, PolyError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, ring };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("operator or end of input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a RingRef,
}

impl Parser<'_> {
    fn error(&self, expected: &str) -> PolyError {
        PolyError::Parse { offset: self.pos, expected: expected.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if op == b'+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("`)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint()?;
                let value = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.uint()?;
                    if den.is_zero() {
                        return Err(self.error("nonzero denominator"));
                    }
                    BigRational::new(num, den)
                } else {
                    BigRational::from_integer(num)
                };
                let c = self.ring.field().from_rational(&value)?;
                Ok(Polynomial::constant(self.ring, c))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let index = self.ring.variable_index(name).ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
                let mut exp = 1u32;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let e = self.uint()?;
                    exp = u32::try_from(e).map_err(|_| self.error("exponent below 2^32"))?;
                }
                let mut m = self.ring.one_monomial();
                *m.slot_mut(index) = exp;
                Ok(Polynomial::term(self.ring, m, self.ring.field().one()))
            }
            _ => Err(self.error("coefficient, variable or `(`")),
        }
    }

    fn uint(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("unsigned integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok(digits.parse().expect("digits"))
    }
}
