//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' INT)?
//! atom   := 'x(' INT ')' | 'y(' INT ')' | INT | invariant | op | act | '(' expr ')'
//! invariant := 'L(' INT ')' | 'Ls(' INT ',' INT ')' | 'Q(' INT ',' INT ')' | 'V(' INT ')'
//!            | 'M(' INT ';' intlist ')' | 'Md(' INT ',' INT ';' intlist ')'
//!            | 'B(' INT ';' '[' intlist ']' ';' INT ')'
//! op     := 'Stu(' INT ',' expr ')' | 'StDelta(' INT ',' expr ')' | 'P(' INT ',' expr ')'
//!         | 'StSR(' '[' intlist ']' ',' '[' intlist ']' ',' expr ')'
//! act    := 'Act(' '[' row (',' row)* ']' ',' expr ')' ; row := '[' intlist ']'
//! intlist := (INT (',' INT)*)?
//! ```
//!
//! A chained power `a^2^3` is rejected; write `(a^2)^3`.

use crate::ast::{Expr, Invariant, Op};
use crate::error::{ParseError, ParseErrorKind};

type PResult<T> = std::result::Result<T, ParseError>;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Ident(String),
    Punct(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(v) => format!("integer {v}"),
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Punct(c) => format!("'{c}'"),
        Tok::End => "end of input".to_string(),
    }
}

fn lex(src: &str) -> PResult<Vec<Token>> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l0, c0) = (line, col);
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            chars.next();
            col += 1;
        } else if c.is_ascii_digit() {
            let mut v: u64 = 0;
            while let Some(&d) = chars.peek() {
                let Some(digit) = d.to_digit(10) else { break };
                v = v.checked_mul(10).and_then(|v| v.checked_add(digit as u64)).ok_or(ParseError {
                    kind: ParseErrorKind::Syntax,
                    line: l0,
                    col: c0,
                    msg: "integer too large".into(),
                })?;
                chars.next();
                col += 1;
            }
            out.push(Token { tok: Tok::Int(v), line: l0, col: c0 });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_') {
                    break;
                }
                s.push(d);
                chars.next();
                col += 1;
            }
            out.push(Token { tok: Tok::Ident(s), line: l0, col: c0 });
        } else if "()[],;+-*^".contains(c) {
            chars.next();
            col += 1;
            out.push(Token { tok: Tok::Punct(c), line: l0, col: c0 });
        } else {
            return Err(ParseError {
                kind: ParseErrorKind::Syntax,
                line,
                col,
                msg: format!("unexpected character '{c}'"),
            });
        }
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_at(t: &Token, kind: ParseErrorKind, msg: String) -> ParseError {
        ParseError { kind, line: t.line, col: t.col, msg }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        let t = self.peek();
        Self::err_at(t, ParseErrorKind::Syntax, format!("expected {wanted}, found {}", describe(&t.tok)))
    }

    fn is_punct(&self, c: char) -> bool {
        self.peek().tok == Tok::Punct(c)
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.is_punct(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{c}'")))
        }
    }

    /// Like `expect`, but a `)` in place of the separator is an arity error.
    fn expect_sep(&mut self, c: char, name: &str) -> PResult<()> {
        if self.is_punct(')') {
            return Err(Self::err_at(self.peek(), ParseErrorKind::Arity, format!("too few arguments to {name}")));
        }
        self.expect(c)
    }

    fn int(&mut self) -> PResult<u64> {
        match self.peek().tok {
            Tok::Int(v) => {
                self.bump();
                Ok(v)
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    /// `INT (',' INT)*` or nothing, stopping before `stop`.
    fn intlist(&mut self, stop: char) -> PResult<Vec<u64>> {
        let mut out = Vec::new();
        if self.is_punct(stop) {
            return Ok(out);
        }
        out.push(self.int()?);
        while self.is_punct(',') {
            self.bump();
            out.push(self.int()?);
        }
        Ok(out)
    }

    fn bracketed(&mut self) -> PResult<Vec<u64>> {
        self.expect('[')?;
        let v = self.intlist(']')?;
        self.expect(']')?;
        Ok(v)
    }

    /// `INT (',' INT)* ')'` with exactly `k` integers.
    fn fixed_ints(&mut self, name: &str, k: usize) -> PResult<Vec<u64>> {
        let start = self.peek().clone();
        let v = self.intlist(')')?;
        if v.len() != k && self.is_punct(')') {
            return Err(Self::err_at(
                &start,
                ParseErrorKind::Arity,
                format!("{name} takes {k} argument{}, got {}", if k == 1 { "" } else { "s" }, v.len()),
            ));
        }
        self.expect(')')?;
        Ok(v)
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.is_punct('+') {
                self.bump();
                acc = Expr::sum(acc, self.term()?);
            } else if self.is_punct('-') {
                self.bump();
                acc = Expr::difference(acc, self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut acc = self.factor()?;
        while self.is_punct('*') {
            self.bump();
            acc = Expr::product(acc, self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> PResult<Expr> {
        let base = self.atom()?;
        if self.is_punct('^') {
            self.bump();
            let k = self.int()?;
            if self.is_punct('^') {
                return Err(Self::err_at(self.peek(), ParseErrorKind::Syntax, "chained '^' needs parentheses".into()));
            }
            return Ok(Expr::pow(base, k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<Expr> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(v) => {
                self.bump();
                Ok(Expr::Int(*v))
            }
            Tok::Punct('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                self.call(&t, name)
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn call(&mut self, at: &Token, name: &str) -> PResult<Expr> {
        const KNOWN: &[&str] = &["x", "y", "L", "Ls", "Q", "V", "M", "Md", "B", "Stu", "StDelta", "P", "StSR", "Act"];
        if !KNOWN.contains(&name) {
            return Err(Self::err_at(at, ParseErrorKind::UnknownIdentifier, format!("unknown identifier '{name}'")));
        }
        self.expect('(')?;
        let inv = |i| Ok(Expr::Invariant(i));
        match name {
            "x" => Ok(Expr::X(self.fixed_ints(name, 1)?[0])),
            "y" => Ok(Expr::Y(self.fixed_ints(name, 1)?[0])),
            "L" => inv(Invariant::L(self.fixed_ints(name, 1)?[0])),
            "V" => inv(Invariant::V(self.fixed_ints(name, 1)?[0])),
            "Ls" => {
                let a = self.fixed_ints(name, 2)?;
                inv(Invariant::Ls(a[0], a[1]))
            }
            "Q" => {
                let a = self.fixed_ints(name, 2)?;
                inv(Invariant::Q(a[0], a[1]))
            }
            "M" => {
                let m = self.int()?;
                self.expect_sep(';', name)?;
                let s = self.intlist(')')?;
                self.expect(')')?;
                inv(Invariant::M(m, s))
            }
            "Md" => {
                let m = self.int()?;
                self.expect_sep(',', name)?;
                let d = self.int()?;
                self.expect_sep(';', name)?;
                let s = self.intlist(')')?;
                self.expect(')')?;
                inv(Invariant::Md(m, d, s))
            }
            "B" => {
                let k = self.int()?;
                self.expect_sep(';', name)?;
                let e = self.bracketed()?;
                self.expect_sep(';', name)?;
                let m = self.int()?;
                self.expect(')')?;
                inv(Invariant::B(k, e, m))
            }
            "Stu" | "StDelta" | "P" => {
                let k = self.int()?;
                self.expect_sep(',', name)?;
                let arg = self.expr()?;
                self.expect(')')?;
                let op = match name {
                    "Stu" => Op::Stu(k),
                    "StDelta" => Op::StDelta(k),
                    _ => Op::P(k),
                };
                Ok(Expr::apply(op, arg))
            }
            "StSR" => {
                let s = self.bracketed()?;
                self.expect_sep(',', name)?;
                let r = self.bracketed()?;
                self.expect_sep(',', name)?;
                let arg = self.expr()?;
                self.expect(')')?;
                Ok(Expr::apply(Op::StSR(s, r), arg))
            }
            _ => {
                self.expect('[')?;
                let mut rows = Vec::new();
                if !self.is_punct(']') {
                    rows.push(self.bracketed()?);
                    while self.is_punct(',') {
                        self.bump();
                        rows.push(self.bracketed()?);
                    }
                }
                self.expect(']')?;
                self.expect_sep(',', name)?;
                let arg = self.expr()?;
                self.expect(')')?;
                Ok(Expr::Act(rows, Box::new(arg)))
            }
        }
    }
}

/// Parses a complete expression.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    if p.peek().tok != Tok::End {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(e)
}
