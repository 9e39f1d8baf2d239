//! Recursive-descent parser for scalar expressions.
//!
//! Grammar: integers, the variables `s`, `A` (both the generator) and `q`
//! (its square), parentheses, binary `+ - * /`, unary minus and `^` with an
//! integer exponent (possibly negative).

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{CoeffError, Field, LaurentPoly, Scalar};

pub(crate) fn parse_scalar(input: &str) -> Result<Scalar, CoeffError> {
    let mut p = Parser { src: input.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> CoeffError {
        CoeffError::Parse { pos: self.pos, msg: msg.to_string() }
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

    fn expr(&mut self) -> Result<Scalar, CoeffError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Scalar, CoeffError> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == b'*' { acc.mul(&rhs) } else { acc.div(&rhs).ok_or(CoeffError::Parse { pos: at, msg: "division by zero".into() })? };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Scalar, CoeffError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Scalar, CoeffError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.pos;
        let e = self.exponent()?;
        if e >= 0 {
            Ok(base.pow(e as u32))
        } else {
            let inv = base.inv().ok_or(CoeffError::Parse { pos: at, msg: "negative power of zero".into() })?;
            Ok(inv.pow(e.unsigned_abs()))
        }
    }

    fn exponent(&mut self) -> Result<i32, CoeffError> {
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.exponent()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                return Ok(e);
            }
            _ => false,
        };
        self.skip_ws();
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.err("expected integer exponent"));
        }
        let v: i32 = digits.parse().map_err(|_| self.err("exponent out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<Scalar, CoeffError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b's' | b'A') => {
                self.pos += 1;
                Ok(Scalar::s())
            }
            Some(b'q') => {
                self.pos += 1;
                Ok(Scalar::q())
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                let n: BigInt = d.parse().map_err(|_| self.err("bad integer"))?;
                Ok(Scalar::from_laurent(LaurentPoly::constant(BigRational::from_integer(n))))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}
