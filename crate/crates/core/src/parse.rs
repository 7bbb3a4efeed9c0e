//! The expression grammar shared by files and the command line:
//!
//! ```text
//! element  = ["+" | "-"] term (("+" | "-") term)*
//! term     = rational ["*" factor ("*" factor)*]
//!          | factor ("*" factor)*
//! factor   = name ["^" positive-int]
//! rational = int ["/" int]
//! name     = letter (letter | digit | "_" | "'")*
//! ```
//!
//! Whitespace is insignificant. A bare rational denotes a multiple of the
//! unit. Parsing only produces raw terms; evaluation against a generator
//! set or a finite basis happens in the algebra that owns the names.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{ParseError, ParseErrorKind};
use crate::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub name: String,
    pub power: u32,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawTerm {
    pub coefficient: Rational,
    pub factors: Vec<Factor>,
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError::new(kind, self.pos)
    }

    fn unexpected(&mut self) -> ParseError {
        match self.peek() {
            Some(c) => self.err(ParseErrorKind::UnexpectedChar(c)),
            None => self.err(ParseErrorKind::UnexpectedEnd),
        }
    }

    fn digits(&mut self) -> Option<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek_raw() {
            if c.is_ascii_digit() {
                self.pos += 1;
            } else {
                break;
            }
        }
        (self.pos > start).then(|| (start, &self.text[start..self.pos]))
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let (start, num) = self.digits().ok_or_else(|| self.unexpected())?;
        let numer: BigInt = num.parse().expect("ascii digits");
        if self.peek() == Some('/') {
            self.bump();
            let (_, den) = self
                .digits()
                .ok_or_else(|| ParseError::new(ParseErrorKind::MalformedRational(self.text[start..self.pos].to_string()), start))?;
            let denom: BigInt = den.parse().expect("ascii digits");
            if denom.is_zero() {
                return Err(ParseError::new(
                    ParseErrorKind::MalformedRational(self.text[start..self.pos].to_string()),
                    start,
                ));
            }
            Ok(Rational::new(numer, denom))
        } else {
            Ok(Rational::from_integer(numer))
        }
    }

    fn name(&mut self) -> Result<(usize, String), ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek_raw() {
            Some(c) if c.is_alphabetic() => {}
            _ => return Err(self.unexpected()),
        }
        while let Some(c) = self.peek_raw() {
            if c.is_alphanumeric() || c == '_' || c == '\'' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        Ok((start, self.text[start..self.pos].to_string()))
    }

    fn factor(&mut self) -> Result<Factor, ParseError> {
        let (position, name) = self.name()?;
        let mut power = 1;
        if self.peek() == Some('^') {
            self.bump();
            let (_, d) = self.digits().ok_or_else(|| self.err(ParseErrorKind::BadExponent))?;
            power = d.parse().map_err(|_| self.err(ParseErrorKind::BadExponent))?;
            if power == 0 {
                return Err(self.err(ParseErrorKind::BadExponent));
            }
        }
        Ok(Factor { name, power, position })
    }

    fn term(&mut self, negative: bool) -> Result<RawTerm, ParseError> {
        let mut coefficient = Rational::one();
        let mut factors = Vec::new();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                coefficient = self.rational()?;
                if self.peek() == Some('*') {
                    self.bump();
                    factors.push(self.factor()?);
                }
            }
            Some(_) => factors.push(self.factor()?),
            None => return Err(self.err(ParseErrorKind::UnexpectedEnd)),
        }
        while self.peek() == Some('*') {
            self.bump();
            factors.push(self.factor()?);
        }
        if negative {
            coefficient = -coefficient;
        }
        Ok(RawTerm { coefficient, factors })
    }
}

/// Splits an expression into signed raw terms.
pub fn parse_terms(text: &str) -> Result<Vec<RawTerm>, ParseError> {
    let mut cur = Cursor { text, pos: 0 };
    let mut terms = Vec::new();
    let mut negative = match cur.peek() {
        Some('-') => {
            cur.bump();
            true
        }
        Some('+') => {
            cur.bump();
            false
        }
        _ => false,
    };
    loop {
        terms.push(cur.term(negative)?);
        match cur.peek() {
            None => break,
            Some('+') => negative = false,
            Some('-') => negative = true,
            Some(_) => return Err(cur.unexpected()),
        }
        cur.bump();
    }
    Ok(terms)
}
