//! Text format: integer coefficients in `t`, e.g. `t^2+t+41`, `2*t+1`, `-3t^3 + 7`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::IntPoly;
use crate::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_whitespace())
        {
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

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    /// `[int ['*']] ['t' ['^' int]]`, at least one part present.
    fn term(&mut self) -> Result<(BigInt, usize)> {
        let coeff = self.digits().map(|d| d.parse::<BigInt>().expect("digits"));
        let star = coeff.is_some() && self.eat(b'*');
        if self.eat(b't') {
            let exp = if self.eat(b'^') {
                match self.digits() {
                    Some(d) => d
                        .parse::<usize>()
                        .or_else(|_| self.err("exponent too large"))?,
                    None => return self.err("expected exponent after '^'"),
                }
            } else {
                1
            };
            Ok((coeff.unwrap_or_else(BigInt::one), exp))
        } else if star {
            self.err("expected 't' after '*'")
        } else {
            match coeff {
                Some(c) => Ok((c, 0)),
                None => self.err("expected a coefficient or 't'"),
            }
        }
    }

    fn poly(&mut self) -> Result<IntPoly> {
        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut first = true;
        loop {
            let negative = if self.eat(b'-') {
                true
            } else if self.eat(b'+') {
                false
            } else if first {
                false
            } else {
                break;
            };
            first = false;
            let (c, e) = self.term()?;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, BigInt::zero());
            }
            if negative {
                coeffs[e] -= c;
            } else {
                coeffs[e] += c;
            }
        }
        if self.peek().is_some() {
            return self.err("unexpected character");
        }
        Ok(IntPoly::new(coeffs))
    }
}

impl FromStr for IntPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parser = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        if parser.peek().is_none() {
            return parser.err("empty polynomial");
        }
        parser.poly()
    }
}

/// Parse a comma- or semicolon-separated family, e.g. `"t, t+2"`.
pub fn parse_family(s: &str) -> Result<Vec<IntPoly>> {
    s.split([',', ';']).map(str::parse).collect()
}
