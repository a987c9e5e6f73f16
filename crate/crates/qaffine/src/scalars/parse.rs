//! Parser for scalar expressions.
//!
//! Accepts the canonical rendering produced by [`Scalar::render`] and, more
//! loosely, any arithmetic expression over rationals, `r` and `s` with
//! `+ - * /`, parentheses and `^` powers (fractional powers only on
//! monomials), for example `(r*s)^(-1/2) * (r + s)`.

use super::{Exponent, Rat, Scalar, ScalarError};

/// Failure to parse a scalar, with the byte offset of the problem.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse scalar at offset {offset}: {message}")]
pub struct ParseScalarError {
    /// Byte offset into the input.
    pub offset: usize,
    /// What went wrong.
    pub message: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

type PResult<T> = Result<T, ParseScalarError>;

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> PResult<T> {
        Err(ParseScalarError { offset: self.pos, message: msg.to_string() })
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> PResult<Scalar> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> PResult<Scalar> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.unary()?;
                acc = acc.div(&d).map_err(|e: ScalarError| ParseScalarError { offset: at, message: e.to_string() })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> PResult<Scalar> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Scalar> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let e = self.exponent()?;
        if e.0 % 4 == 0 {
            return base.pow(e.0 / 4).map_err(|err| ParseScalarError { offset: at, message: err.to_string() });
        }
        let (c, (a, b)) = match base.as_monomial() {
            Some(m) => m,
            None => return self.err("fractional power of a non-monomial"),
        };
        if !c.is_one() {
            return self.err("fractional power needs coefficient 1");
        }
        let scale = |x: i32| -> Option<i32> {
            let p = x as i64 * e.0 as i64;
            if p % 4 == 0 {
                i32::try_from(p / 4).ok()
            } else {
                None
            }
        };
        match (scale(a), scale(b)) {
            (Some(x), Some(y)) => Ok(Scalar::mono(Rat::ONE, x, y)),
            _ => self.err("exponent leaves the quarter-power lattice"),
        }
    }

    fn exponent(&mut self) -> PResult<Exponent> {
        let paren = self.eat(b'(');
        let neg = self.eat(b'-');
        let n = self.integer()?;
        let d = if self.eat(b'/') { self.integer()? } else { 1 };
        if paren && !self.eat(b')') {
            return self.err("expected `)` after exponent");
        }
        let n = if neg { -n } else { n };
        if d == 0 || (4 * n) % d != 0 {
            return self.err("exponent denominator must divide 4");
        }
        Ok(Exponent((4 * n / d) as i32))
    }

    fn integer(&mut self) -> PResult<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().or_else(|_| self.err("integer too large"))
    }

    fn atom(&mut self) -> PResult<Scalar> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected `)`");
                }
                Ok(v)
            }
            Some(b'r') => {
                self.pos += 1;
                Ok(Scalar::r())
            }
            Some(b's') => {
                self.pos += 1;
                Ok(Scalar::s())
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let r: Rat =
                    text.parse().map_err(|_| ParseScalarError { offset: start, message: "bad number".into() })?;
                Ok(Scalar::rat(r))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a scalar expression.
pub fn parse_scalar(text: &str) -> Result<Scalar, ParseScalarError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let v = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_loose_forms() {
        let a: Scalar = "(r*s)^(-1/2) * (r + s)".parse().unwrap();
        let b = Scalar::rs_half(-1).mul(&Scalar::r().add(&Scalar::s()));
        assert_eq!(a, b);
        let c: Scalar = "r^-1 s".replace(' ', "*").parse().unwrap();
        assert_eq!(c, Scalar::s().div(&Scalar::r()).unwrap());
        let d: Scalar = "3/4 - r^(1/4)".parse().unwrap();
        assert_eq!(d, Scalar::rat(Rat::new(3, 4)).sub(&Scalar::mono(Rat::ONE, 1, 0)));
    }

    #[test]
    fn reports_offsets() {
        let e = parse_scalar("r + ?").unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(parse_scalar("(r+s)^(1/2)").is_err());
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("r^(1/3)").is_err());
    }
}
