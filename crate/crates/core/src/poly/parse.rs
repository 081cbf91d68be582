//! Text syntax for polynomials: `x^2*y - 3/4*z + 1`.
//!
//! Division is allowed only by nonzero constants. In prime-field rings the
//! literal `p:k` denotes the residue of `k` modulo `p`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Ring};

pub fn parse_poly(ring: &Ring, text: &str) -> Result<Polynomial> {
    parse_poly_at(ring, text, 1, 1)
}

/// Like [`parse_poly`], reporting errors relative to where `text` starts in a larger file.
pub fn parse_poly_at(ring: &Ring, text: &str, line: usize, column: usize) -> Result<Polynomial> {
    let mut p = Parser {
        ring,
        chars: text.char_indices().collect(),
        pos: 0,
        text,
        line,
        column,
    };
    p.skip_ws();
    if p.peek().is_none() {
        return Err(p.error("empty polynomial"));
    }
    let out = p.expr()?;
    p.skip_ws();
    if p.peek().is_some() {
        return Err(p.error(&format!("unexpected `{}`", p.peek().unwrap())));
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Ring,
    chars: Vec<(usize, char)>,
    pos: usize,
    text: &'a str,
    line: usize,
    column: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> Error {
        let offset = self
            .chars
            .get(self.pos)
            .map(|c| c.0)
            .unwrap_or(self.text.len());
        let before = &self.text[..offset];
        let newlines = before.matches('\n').count();
        let column = match before.rfind('\n') {
            Some(i) => before[i + 1..].chars().count() + 1,
            None => self.column + before.chars().count(),
        };
        Error::Parse {
            line: self.line + newlines,
            column,
            message: message.to_string(),
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        self.skip_ws();
        let mut negate = false;
        match self.peek() {
            Some('-') | Some('\u{2212}') => {
                self.bump();
                negate = true;
            }
            Some('+') => {
                self.bump();
            }
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some('-') | Some('\u{2212}') => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.bump();
                    let f = self.power()?;
                    acc = &acc * &f;
                }
                Some('/') => {
                    self.bump();
                    self.skip_ws();
                    let start = self.pos;
                    let d = self.power()?;
                    let Some(c) = d.constant_value() else {
                        self.pos = start;
                        return Err(self.error("division only by constants"));
                    };
                    let inv = c.inv().map_err(|_| {
                        self.pos = start;
                        self.error("division by zero")
                    })?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() == Some('^') {
            self.bump();
            self.skip_ws();
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("exponent must be a non-negative integer"));
            }
            let e: u32 = digits
                .parse()
                .map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.bump();
        }
        s
    }

    fn atom(&mut self) -> Result<Polynomial> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                self.skip_ws();
                if self.bump() != Some(')') {
                    self.pos -= 1;
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let digits = self.digits();
                if self.peek() == Some(':') {
                    self.bump();
                    let residue = self.digits();
                    let literal = format!("{digits}:{residue}");
                    return match self.ring.field().parse_scalar(&literal) {
                        Ok(s) => Ok(Polynomial::constant(self.ring, s)),
                        Err(e) => {
                            self.pos = start;
                            Err(self.error(&e.to_string()))
                        }
                    };
                }
                let n: BigInt = digits.parse().expect("digits");
                Ok(Polynomial::constant(
                    self.ring,
                    self.ring.field().from_bigint(&n),
                ))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                let mut name = String::new();
                while let Some(c) = self
                    .peek()
                    .filter(|c| c.is_ascii_alphanumeric() || *c == '_')
                {
                    name.push(c);
                    self.bump();
                }
                match self.ring.var_index(&name) {
                    Some(i) => Ok(Polynomial::term(
                        self.ring,
                        Monomial::var(self.ring.nvars(), i, 1),
                        self.ring.one(),
                    )),
                    None => {
                        self.pos = start;
                        Err(self.error(&format!("unknown variable `{name}` in {}", self.ring)))
                    }
                }
            }
            Some(c) => Err(self.error(&format!("unexpected `{c}`"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
