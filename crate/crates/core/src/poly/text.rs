//! Canonical text and JSON forms of elements.
//!
//! Text grammar:
//!
//! ```text
//! element := '-'? term (('+' | '-') term)* | '0'
//! term    := coeff ('*' factor)* | factor ('*' factor)*
//! factor  := 'x' INT | 'y' INT ('^' INT)?
//! coeff   := INT            (reduced mod p)
//! ```

use serde::{Deserialize, Serialize};

use super::{Accumulator, Context, Element, Monomial};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: u64,
    pub ext: Vec<usize>,
    pub exp: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub p: u64,
    pub n: usize,
    pub terms: Vec<TermJson>,
}

impl Element {
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let n = self.ctx.n();
        let mut parts = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut factors: Vec<String> = t.mono.ext_indices().map(|i| format!("x{i}")).collect();
            for i in 1..=n {
                match t.mono.exp(i) {
                    0 => {}
                    1 => factors.push(format!("y{i}")),
                    e => factors.push(format!("y{i}^{e}")),
                }
            }
            if factors.is_empty() {
                parts.push(t.coeff.to_string());
            } else if t.coeff == 1 {
                parts.push(factors.join("*"));
            } else {
                parts.push(format!("{}*{}", t.coeff, factors.join("*")));
            }
        }
        parts.join(" + ")
    }

    pub fn parse(ctx: Context, src: &str) -> Result<Element> {
        Parser { ctx, src: src.as_bytes(), pos: 0 }.element()
    }

    pub fn to_json_value(&self) -> ElementJson {
        let n = self.ctx.n();
        ElementJson {
            p: self.ctx.p(),
            n,
            terms: self
                .terms
                .iter()
                .map(|t| TermJson { c: t.coeff, ext: t.ext(), exp: t.mono.exps()[..n].to_vec() })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("plain data serializes")
    }

    pub fn from_json(src: &str) -> Result<Element> {
        let v: ElementJson =
            serde_json::from_str(src).map_err(|e| Error::Syntax { pos: e.column(), msg: e.to_string() })?;
        Element::from_json_value(&v)
    }

    pub fn from_json_value(v: &ElementJson) -> Result<Element> {
        let ctx = Context::new(v.p, v.n)?;
        let mut terms = Vec::with_capacity(v.terms.len());
        for t in &v.terms {
            if t.exp.len() != v.n {
                return Err(Error::InvalidArgument(format!("exponent vector of length {} (n = {})", t.exp.len(), v.n)));
            }
            if let Some(&bad) = t.ext.iter().find(|&&i| i == 0 || i > v.n) {
                return Err(Error::IndexOutOfRange { index: bad, n: v.n });
            }
            let mono = Monomial::new(&t.ext, &t.exp)
                .ok_or_else(|| Error::InvalidArgument("exterior indices must be strictly increasing".into()))?;
            terms.push((t.c, mono));
        }
        Element::from_terms(ctx, terms)
    }
}

struct Parser<'a> {
    ctx: Context,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos + 1, msg: msg.into() })
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

    fn int(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits").parse().or_else(|_| {
            self.pos = start;
            self.err("integer too large")
        })
    }

    fn index(&mut self) -> Result<usize> {
        let start = self.pos;
        let i = self.int()? as usize;
        if i == 0 || i > self.ctx.n() {
            self.pos = start;
            return self.err(format!("variable index {i} out of range 1..={}", self.ctx.n()));
        }
        Ok(i)
    }

    fn element(&mut self) -> Result<Element> {
        let p = self.ctx.p();
        let mut acc = Accumulator::new(self.ctx);
        let mut negative = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negative = true;
        }
        loop {
            let (c, term) = self.term()?;
            let c = if negative { (p - c) % p } else { c };
            for t in term.terms() {
                acc.add(t.mono, crate::modp::mul_mod(t.coeff, c, p));
            }
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negative = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negative = true;
                }
                None => break,
                Some(ch) => return self.err(format!("unexpected '{}'", ch as char)),
            }
        }
        Ok(acc.finish())
    }

    fn term(&mut self) -> Result<(u64, Element)> {
        let mut coeff = 1;
        let mut value = Element::one(self.ctx);
        let mut first = true;
        loop {
            match self.peek() {
                Some(b'0'..=b'9') if first => coeff = self.int()? % self.ctx.p(),
                Some(b'x') | Some(b'y') => value = value.mul(&self.factor()?)?,
                Some(_) | None => return self.err("expected factor"),
            }
            first = false;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((coeff, value));
            }
        }
    }

    fn factor(&mut self) -> Result<Element> {
        let kind = self.src[self.pos];
        self.pos += 1;
        if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            return self.err("expected variable index");
        }
        let i = self.index()?;
        if kind == b'x' {
            return Element::x(self.ctx, i);
        }
        let mut e = 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            e = self.int()?;
        }
        Element::y_pow(self.ctx, i, e)
    }
}
