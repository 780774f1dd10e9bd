//! Text grammar for polynomials.
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := rational | var ['^' uint]
//! var    := 'x' | 'y'
//! rational := uint ['/' uint]
//! ```
//!
//! The printer emits the canonical form: terms by descending total degree
//! then descending power of `x`, unit coefficients and unit exponents
//! omitted, `0` for the zero polynomial.

use std::fmt;
use std::str::FromStr;

use super::poly::BivariatePoly;
use super::rational::Rational;
use crate::error::{Error, Result};

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by(|a, b| {
            let (ia, ja) = a.0;
            let (ib, jb) = b.0;
            (ib + jb).cmp(&(ia + ja)).then(ib.cmp(&ia))
        });
        for (n, ((i, j), c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || (i == 0 && j == 0) {
                parts.push(mag.to_string());
            }
            for (v, e) in [("x", i), ("y", j)] {
                match e {
                    0 => {}
                    1 => parts.push(v.to_string()),
                    _ => parts.push(format!("{v}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl FromStr for BivariatePoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Parser::new(s).parse()
    }
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            chars: src.chars().collect(),
            pos: 0,
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in `{}`", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn uint(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn parse(mut self) -> Result<BivariatePoly> {
        let mut acc = BivariatePoly::zero();
        let mut sign = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -1
            }
            Some('+') => {
                self.pos += 1;
                1
            }
            Some(_) => 1,
            None => return Err(self.err("empty polynomial")),
        };
        loop {
            let (c, i, j) = self.term()?;
            let c = if sign < 0 { -c } else { c };
            acc = &acc + &BivariatePoly::monomial(c, i, j);
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some('-') => {
                    self.pos += 1;
                    sign = -1;
                }
                None => return Ok(acc),
                Some(_) => return Err(self.err("expected `+` or `-`")),
            }
        }
    }

    fn term(&mut self) -> Result<(Rational, u32, u32)> {
        let mut coeff = Rational::one();
        let (mut i, mut j) = (0u32, 0u32);
        loop {
            match self.peek() {
                Some(ch) if ch.is_ascii_digit() => {
                    let p = self.uint()?;
                    let r = if self.peek() == Some('/') {
                        self.pos += 1;
                        let q = self.uint()?;
                        format!("{p}/{q}").parse::<Rational>()?
                    } else {
                        p.parse::<Rational>()?
                    };
                    coeff = coeff * r;
                }
                Some(v @ ('x' | 'y')) => {
                    self.pos += 1;
                    let e = if self.peek() == Some('^') {
                        self.pos += 1;
                        self.uint()?
                            .parse::<u32>()
                            .map_err(|_| self.err("exponent too large"))?
                    } else {
                        1
                    };
                    if v == 'x' {
                        i += e;
                    } else {
                        j += e;
                    }
                }
                _ => return Err(self.err("expected coefficient, `x` or `y`")),
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                return Ok((coeff, i, j));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BivariatePoly {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_printing() {
        assert_eq!(p("y + x^2 + 2*x*y").to_string(), "x^2 + 2*x*y + y");
        assert_eq!(p("-3/2*x^2*y + 5 - x").to_string(), "-3/2*x^2*y - x + 5");
        assert_eq!(p("x - x").to_string(), "0");
        assert_eq!(p("0").to_string(), "0");
        assert_eq!(p("1").to_string(), "1");
        assert_eq!(p("-1").to_string(), "-1");
    }

    #[test]
    fn lenient_input() {
        assert_eq!(p("2*x*x*y"), p("2*x^2*y"));
        assert_eq!(p("x*3"), p("3*x"));
        assert_eq!(p("  +x -  y "), p("x - y"));
        assert_eq!(p("6/4*y^0"), p("3/2"));
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "x +", "x ^ ", "2/0*x", "z", "x y", "x**2", "1/"] {
            assert!(bad.parse::<BivariatePoly>().is_err(), "accepted `{bad}`");
        }
    }
}
