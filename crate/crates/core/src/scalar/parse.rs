//! Recursive-descent parser for the scalar text grammar.
//!
//! ```text
//! expr   := term (('+'|'-') term)*        (a single leading sign is allowed)
//! term   := factor ('*'? factor)*
//! factor := INT | 'q' ('^' UINT)? | '(' expr ')'
//! scalar := expr ('/' expr)?
//! ```
//!
//! Whitespace between tokens is ignored. Only ASCII is accepted.

use num_bigint::BigInt;

use super::poly::IntPoly;
use crate::error::ParseError;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn expect(&mut self, byte: u8) -> Result<(), ParseError> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", byte as char)))
        }
    }

    fn uint(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an unsigned integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(digits.parse().unwrap())
    }

    fn expr(&mut self) -> Result<IntPoly, ParseError> {
        let negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<IntPoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(c) if c.is_ascii_digit() || c == b'q' || c == b'(' => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<IntPoly, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(IntPoly::constant(self.uint()?)),
            Some(b'q') => {
                self.pos += 1;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let e = self.uint()?;
                    let e: usize = e
                        .try_into()
                        .map_err(|_| self.err("exponent too large"))?;
                    Ok(IntPoly::monomial(BigInt::from(1), e))
                } else {
                    Ok(IntPoly::monomial(BigInt::from(1), 1))
                }
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(_) => Err(self.err("expected an integer, 'q' or '('")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses `text` into a numerator/denominator pair of integer polynomials.
///
/// The denominator is `None` when no `/` is present. Zero denominators are
/// reported by the caller, which knows the target field.
pub(crate) fn parse_fraction(text: &str) -> Result<(IntPoly, Option<IntPoly>), ParseError> {
    if let Some((idx, ch)) = text.char_indices().find(|(_, c)| !c.is_ascii()) {
        let message = if ch == '\u{2212}' {
            "unicode minus sign is not accepted, use ASCII '-'".to_string()
        } else {
            format!("non-ASCII character {ch:?}")
        };
        return Err(ParseError::Syntax {
            position: idx,
            message,
        });
    }
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let num = p.expr()?;
    let den = if p.peek() == Some(b'/') {
        p.pos += 1;
        Some(p.expr()?)
    } else {
        None
    };
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok((num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parsed(text: &str) -> String {
        let (n, d) = parse_fraction(text).unwrap();
        match d {
            Some(d) => format!("{n} | {d}"),
            None => n.to_string(),
        }
    }

    #[test]
    fn grammar_cases() {
        assert_eq!(parsed("-3/4"), "-3 | 4");
        assert_eq!(parsed("q^0"), "1");
        assert_eq!(parsed("2q^2 - (1+q)(1-q)"), "-1+3*q^2");
        assert_eq!(parsed("(1-q)/(1-q^2)"), "1-q | 1-q^2");
        assert_eq!(parsed(" 3 * q "), "3*q");
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "1+", "q^", "(1", "1/2/3", "x", "1)", "q^-1", "1 -- 2"] {
            assert!(parse_fraction(bad).is_err(), "{bad:?} should fail");
        }
        let err = parse_fraction("\u{2212}3/4").unwrap_err();
        assert!(err.to_string().contains("unicode minus"));
    }

    #[test]
    fn error_reports_position() {
        match parse_fraction("1+*2").unwrap_err() {
            ParseError::Syntax { position, .. } => assert_eq!(position, 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
