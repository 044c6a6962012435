//! Combiner words: small expressions over the coordinates of a joint
//! distribution, such as `x0+x1`, `x0-x2` or `x0*x1+x2*x3`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use super::structure::{Carrier, Element};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Word {
    /// The value of coordinate `i`.
    Coord(usize),
    /// A fixed carrier element (raw coordinates, canonicalized on use).
    Const(Vec<BigInt>),
    Add(Box<Word>, Box<Word>),
    Sub(Box<Word>, Box<Word>),
    Neg(Box<Word>),
    /// Ring product; rejected on group carriers.
    Mul(Box<Word>, Box<Word>),
}

impl Word {
    pub fn coord(i: usize) -> Word {
        Word::Coord(i)
    }

    pub fn constant(v: i64) -> Word {
        Word::Const(vec![BigInt::from(v)])
    }

    pub fn sum(a: Word, b: Word) -> Word {
        Word::Add(Box::new(a), Box::new(b))
    }

    pub fn diff(a: Word, b: Word) -> Word {
        Word::Sub(Box::new(a), Box::new(b))
    }

    pub fn prod(a: Word, b: Word) -> Word {
        Word::Mul(Box::new(a), Box::new(b))
    }

    /// `x_i + x_j`
    pub fn sum_of(i: usize, j: usize) -> Word {
        Word::sum(Word::Coord(i), Word::Coord(j))
    }

    /// `x_i - x_j`
    pub fn diff_of(i: usize, j: usize) -> Word {
        Word::diff(Word::Coord(i), Word::Coord(j))
    }

    /// `x_i * x_j`
    pub fn prod_of(i: usize, j: usize) -> Word {
        Word::prod(Word::Coord(i), Word::Coord(j))
    }

    /// Largest coordinate index referenced, if any.
    pub fn max_coord(&self) -> Option<usize> {
        match self {
            Word::Coord(i) => Some(*i),
            Word::Const(_) => None,
            Word::Neg(a) => a.max_coord(),
            Word::Add(a, b) | Word::Sub(a, b) | Word::Mul(a, b) => {
                match (a.max_coord(), b.max_coord()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                }
            }
        }
    }

    pub fn uses_product(&self) -> bool {
        match self {
            Word::Coord(_) | Word::Const(_) => false,
            Word::Neg(a) => a.uses_product(),
            Word::Mul(..) => true,
            Word::Add(a, b) | Word::Sub(a, b) => a.uses_product() || b.uses_product(),
        }
    }

    /// Checks the word against a carrier and a tuple arity before evaluation.
    pub fn check(&self, carrier: &Carrier, arity: usize) -> Result<()> {
        if let Some(i) = self.max_coord() {
            if i >= arity {
                return Err(Error::IndexOutOfRange { index: i, arity });
            }
        }
        if self.uses_product() && !carrier.is_ring() {
            return Err(Error::RingOpOnGroup);
        }
        Ok(())
    }

    pub fn eval(&self, carrier: &Carrier, tuple: &[Element]) -> Result<Element> {
        match self {
            Word::Coord(i) => tuple
                .get(*i)
                .cloned()
                .ok_or(Error::IndexOutOfRange { index: *i, arity: tuple.len() }),
            Word::Const(raw) => carrier.canonicalize(raw),
            Word::Add(a, b) => carrier.add(&a.eval(carrier, tuple)?, &b.eval(carrier, tuple)?),
            Word::Sub(a, b) => carrier.sub(&a.eval(carrier, tuple)?, &b.eval(carrier, tuple)?),
            Word::Neg(a) => carrier.neg(&a.eval(carrier, tuple)?),
            Word::Mul(a, b) => carrier.mul(&a.eval(carrier, tuple)?, &b.eval(carrier, tuple)?),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn atom(w: &Word, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match w {
                Word::Coord(_) | Word::Const(_) => write!(f, "{w}"),
                _ => write!(f, "({w})"),
            }
        }
        match self {
            Word::Coord(i) => write!(f, "x{i}"),
            Word::Const(c) if c.len() == 1 => write!(f, "{}", c[0]),
            Word::Const(c) => {
                let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                write!(f, "[{}]", parts.join(","))
            }
            Word::Add(a, b) => {
                write!(f, "{a}+")?;
                match **b {
                    Word::Add(..) | Word::Sub(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
            Word::Sub(a, b) => {
                write!(f, "{a}-")?;
                atom(b, f)
            }
            Word::Neg(a) => {
                write!(f, "-")?;
                atom(a, f)
            }
            Word::Mul(a, b) => {
                atom(a, f)?;
                write!(f, "*")?;
                atom(b, f)
            }
        }
    }
}

// Grammar:
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := '-' factor | 'x' digits | integer | '(' expr ')'
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::BadWord(format!("{msg} at offset {}", self.pos))
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

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    fn expr(&mut self) -> Result<Word> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Word::sum(lhs, self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Word::diff(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Word> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            lhs = Word::prod(lhs, self.factor()?);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Word> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Word::Neg(Box::new(self.factor()?)))
            }
            Some(b'x') => {
                self.pos += 1;
                let d = self.digits();
                d.parse().map(Word::Coord).map_err(|_| self.err("expected coordinate index"))
            }
            Some(b'(') => {
                self.pos += 1;
                let w = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(w)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                d.parse::<BigInt>()
                    .map(|v| Word::Const(vec![v]))
                    .map_err(|_| self.err("bad integer"))
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let w = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        Ok(w)
    }
}
