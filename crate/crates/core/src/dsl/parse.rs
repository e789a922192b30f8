use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use super::ast::{Call, Expr, IdentityFile, Statement, Sym};
use crate::mock::MockKind;
use crate::qseries::{Base, Monomial};

/// A syntax error with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Ident(String),
    Punct(&'static str),
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Punct(p) => write!(f, "`{p}`"),
            Tok::Newline => write!(f, "end of line"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const PUNCT: [&str; 13] = ["==", "+", "-", "*", "/", "^", "(", ")", ";", ",", "@", ":", "="];

/// Tokenizer over the whole text. Newlines are significant only outside
/// parentheses; `#` starts a comment that runs to the end of the line.
struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
    depth: i64,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0, line: 1, col: 1, depth: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn bump(&mut self, n: usize) {
        for ch in self.src[self.pos..self.pos + n].chars() {
            if ch == '\n' {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
        }
        self.pos += n;
    }

    fn skip_trivia(&mut self) {
        loop {
            let r = self.rest();
            let Some(ch) = r.chars().next() else { return };
            if ch == '#' {
                let n = r.find('\n').unwrap_or(r.len());
                self.bump(n);
            } else if ch == '\n' && self.depth > 0 {
                self.bump(1);
            } else if ch.is_whitespace() && ch != '\n' {
                self.bump(ch.len_utf8());
            } else {
                return;
            }
        }
    }

    fn next(&mut self) -> Result<Token, ParseError> {
        self.skip_trivia();
        let (line, col) = (self.line, self.col);
        let r = self.rest();
        let tok = match r.chars().next() {
            None => Tok::Eof,
            Some('\n') => {
                self.bump(1);
                Tok::Newline
            }
            Some(c) if c.is_ascii_digit() => {
                let n = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
                let v = r[..n].parse::<i64>().map_err(|_| ParseError {
                    line,
                    col,
                    expected: vec!["an integer that fits in 64 bits".into()],
                    found: format!("`{}`", &r[..n]),
                })?;
                self.bump(n);
                Tok::Int(v)
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let n = r
                    .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                    .unwrap_or(r.len());
                let s = r[..n].to_string();
                self.bump(n);
                Tok::Ident(s)
            }
            Some(c) => {
                let Some(p) = PUNCT.iter().find(|p| r.starts_with(**p)) else {
                    return Err(ParseError {
                        line,
                        col,
                        expected: vec!["a token".into()],
                        found: format!("`{c}`"),
                    });
                };
                match *p {
                    "(" => self.depth += 1,
                    ")" => self.depth -= 1,
                    _ => {}
                }
                self.bump(p.len());
                Tok::Punct(p)
            }
        };
        Ok(Token { tok, line, col })
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    peeked: Option<Token>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { lex: Lexer::new(src), peeked: None }
    }

    fn peek(&mut self) -> Result<&Token, ParseError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lex.next()?);
        }
        Ok(self.peeked.as_ref().unwrap())
    }

    fn next(&mut self) -> Result<Token, ParseError> {
        self.peek()?;
        Ok(self.peeked.take().unwrap())
    }

    fn error<T>(&mut self, expected: &[&str]) -> Result<T, ParseError> {
        let t = self.peek()?.clone();
        Err(ParseError {
            line: t.line,
            col: t.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.tok.to_string(),
        })
    }

    fn at_punct(&mut self, p: &str) -> Result<bool, ParseError> {
        Ok(matches!(&self.peek()?.tok, Tok::Punct(x) if *x == p))
    }

    fn eat(&mut self, p: &str) -> Result<bool, ParseError> {
        if self.at_punct(p)? {
            self.next()?;
            return Ok(true);
        }
        Ok(false)
    }

    fn expect(&mut self, p: &str) -> Result<(), ParseError> {
        if !self.eat(p)? {
            return self.error(&[&format!("`{p}`")]);
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat("+")? {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat("-")? {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat("*")? {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat("/")? {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat("-")? {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.postfix()
    }

    fn postfix(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.primary()?;
        while self.eat("^")? {
            e = Expr::Pow(Box::new(e), self.signed_int()?);
        }
        Ok(e)
    }

    fn signed_int(&mut self) -> Result<i64, ParseError> {
        let neg = self.eat("-")?;
        match self.peek()?.tok {
            Tok::Int(n) => {
                self.next()?;
                Ok(if neg { -n } else { n })
            }
            _ => self.error(&["an integer"]),
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let t = self.peek()?.clone();
        match t.tok {
            Tok::Int(n) => {
                self.next()?;
                Ok(Expr::Int(n))
            }
            Tok::Punct("(") => {
                self.next()?;
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.next()?;
                match name.as_str() {
                    "q" => {
                        if self.eat("^")? {
                            Ok(Expr::QPow(self.signed_int()?))
                        } else {
                            Ok(Expr::QPow(1))
                        }
                    }
                    "w" => Ok(Expr::Sym(Sym::Omega)),
                    "I" => Ok(Expr::Sym(Sym::I)),
                    "z" => Ok(Expr::Sym(Sym::Zeta)),
                    _ => self.call(&name, t.line, t.col).map(Expr::Call),
                }
            }
            _ => self.error(&["an integer", "`q`", "`w`", "`I`", "`z`", "a function call", "`(`"]),
        }
    }

    fn monomial(&mut self) -> Result<Monomial, ParseError> {
        let t = self.peek()?.clone();
        let e = self.expr()?;
        as_monomial(&e).ok_or_else(|| ParseError {
            line: t.line,
            col: t.col,
            expected: vec!["a monomial such as `-w*q^3`".into()],
            found: format!("`{e}`"),
        })
    }

    fn base(&mut self) -> Result<Base, ParseError> {
        let t = self.peek()?.clone();
        let m = self.monomial()?;
        Base::new(m).map_err(|_| ParseError {
            line: t.line,
            col: t.col,
            expected: vec!["a base with positive q-exponent".into()],
            found: format!("`{m}`"),
        })
    }

    fn call(&mut self, name: &str, line: usize, col: usize) -> Result<Call, ParseError> {
        const KNOWN: [&str; 8] = ["j", "J", "Jb", "Jm", "P", "m", "f", "D"];
        if !KNOWN.contains(&name) && name.parse::<MockKind>().is_err() {
            return Err(ParseError {
                line,
                col,
                expected: vec!["a known function or symbol".into()],
                found: format!("`{name}`"),
            });
        }
        self.expect("(")?;
        let call = match name {
            "j" => {
                let x = self.monomial()?;
                self.expect(";")?;
                Call::Theta { x, base: self.base()? }
            }
            "J" | "Jb" => {
                let a = self.signed_int()?;
                self.expect(",")?;
                let m = self.signed_int()?;
                if name == "J" {
                    Call::J { a, m }
                } else {
                    Call::Jbar { a, m }
                }
            }
            "Jm" => Call::Jm { m: self.signed_int()? },
            "P" => {
                let x = self.monomial()?;
                self.expect(";")?;
                let base = self.base()?;
                self.expect(";")?;
                let n = match self.peek()?.tok.clone() {
                    Tok::Ident(s) if s == "inf" => {
                        self.next()?;
                        None
                    }
                    Tok::Int(n) => {
                        self.next()?;
                        Some(n as u64)
                    }
                    _ => return self.error(&["a length", "`inf`"]),
                };
                Call::Poch { x, base, n }
            }
            "m" => {
                let x = self.monomial()?;
                self.expect(";")?;
                let base = self.base()?;
                self.expect(";")?;
                Call::Appell { x, base, z: self.monomial()? }
            }
            "f" => {
                let a = self.signed_int()?;
                self.expect(",")?;
                let b = self.signed_int()?;
                self.expect(",")?;
                let c = self.signed_int()?;
                self.expect(";")?;
                let x = self.monomial()?;
                self.expect(",")?;
                let y = self.monomial()?;
                self.expect(";")?;
                Call::Hecke { a, b, c, x, y, base: self.base()? }
            }
            "D" => {
                let n = self.signed_int()?;
                self.expect(";")?;
                let x = self.monomial()?;
                self.expect(";")?;
                let base = self.base()?;
                self.expect(";")?;
                let z = self.monomial()?;
                self.expect(";")?;
                Call::Dn { n, x, base, z, zp: self.monomial()? }
            }
            other => {
                let kind = other.parse::<MockKind>().expect("checked above");
                Call::Mock { kind, arg: self.monomial()? }
            }
        };
        self.expect(")")?;
        Ok(call)
    }

    fn end_of_statement(&mut self) -> Result<(), ParseError> {
        match self.peek()?.tok {
            Tok::Newline | Tok::Eof => Ok(()),
            _ => self.error(&["an operator", "end of line"]),
        }
    }
}

/// Folds a product of units and powers of `q` to a monomial.
fn as_monomial(e: &Expr) -> Option<Monomial> {
    match e {
        Expr::Int(1) => Some(Monomial::ONE),
        Expr::Sym(s) => Some(Monomial::unit(s.unit())),
        Expr::QPow(k) => Some(Monomial::q(*k)),
        Expr::Neg(a) => as_monomial(a).map(Monomial::neg),
        Expr::Mul(a, b) => Some(as_monomial(a)?.mul(as_monomial(b)?)),
        Expr::Div(a, b) => Some(as_monomial(a)?.div(as_monomial(b)?)),
        Expr::Pow(a, k) => Some(as_monomial(a)?.pow(*k)),
        _ => None,
    }
}

/// Parses a single expression.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(src);
    let e = p.expr()?;
    while matches!(p.peek()?.tok, Tok::Newline) {
        p.next()?;
    }
    if !matches!(p.peek()?.tok, Tok::Eof) {
        return p.error(&["an operator", "end of input"]);
    }
    Ok(e)
}

/// Parses an identity file: one `name : lhs == rhs [@ order]` per line,
/// continued across lines while parentheses are open.
pub fn parse_file(src: &str) -> Result<IdentityFile, ParseError> {
    let mut p = Parser::new(src);
    let mut statements = Vec::new();
    let mut seen = HashSet::new();
    loop {
        p.lex.skip_trivia();
        let rest = p.lex.rest();
        if rest.is_empty() {
            break;
        }
        if rest.starts_with('\n') {
            p.lex.bump(1);
            continue;
        }
        let (line, col) = (p.lex.line, p.lex.col);
        let eol = rest.find('\n').unwrap_or(rest.len());
        let Some(colon) = rest[..eol].find(':') else {
            return Err(ParseError {
                line,
                col: col + eol,
                expected: vec!["`:` after the statement name".into()],
                found: "end of line".into(),
            });
        };
        let name = rest[..colon].trim().to_string();
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(ParseError {
                line,
                col,
                expected: vec!["a statement name".into()],
                found: format!("`{}`", &rest[..colon]),
            });
        }
        if !seen.insert(name.clone()) {
            return Err(ParseError {
                line,
                col,
                expected: vec!["a unique statement name".into()],
                found: format!("duplicate `{name}`"),
            });
        }
        p.lex.bump(colon + 1);
        let lhs = p.expr()?;
        p.expect("==")?;
        let rhs = p.expr()?;
        let order = if p.eat("@")? { Some(p.signed_int()?) } else { None };
        p.end_of_statement()?;
        p.next()?;
        statements.push(Statement { name, lhs, rhs, order, line });
    }
    Ok(IdentityFile { statements })
}

/// Parses `lhs == rhs` without a name or order.
pub fn parse_identity(src: &str) -> Result<(Expr, Expr), ParseError> {
    let mut p = Parser::new(src);
    let lhs = p.expr()?;
    p.expect("==")?;
    let rhs = p.expr()?;
    if !matches!(p.peek()?.tok, Tok::Eof | Tok::Newline) {
        return p.error(&["an operator", "end of input"]);
    }
    Ok((lhs, rhs))
}
