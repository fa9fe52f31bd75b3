//! Infix expression parser for nonlinearities in one variable `t`.
//!
//! Grammar (ASCII only):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?          // right associative
//! atom   := number | 't' | name '(' expr ')' | '(' expr ')'
//! name   := 'exp' | 'ln' | 'sqrt'
//! ```
//!
//! Evaluation runs over [`Jet2`], so one pass yields `(f, f', f'')`.

use crate::jet::Jet2;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("unexpected character '{ch}' at byte {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("unexpected token at byte {pos}: expected {expected}")]
    Unexpected { pos: usize, expected: &'static str },
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("unknown function '{name}' at byte {pos}")]
    UnknownFunction { name: String, pos: usize },
    #[error("malformed number at byte {pos}")]
    BadNumber { pos: usize },
    #[error("expression is undefined at t = {t} (evaluates to a non-finite value)")]
    Domain { t: f64 },
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Var,
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Exp(Box<Node>),
    Ln(Box<Node>),
    Sqrt(Box<Node>),
}

/// A parsed arithmetic expression in the variable `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprAst {
    root: Node,
    source: String,
}

impl Serialize for ExprAst {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.source)
    }
}

impl std::fmt::Display for ExprAst {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.source)
    }
}

impl ExprAst {
    pub fn parse(src: &str) -> Result<Self, ParseError> {
        let tokens = tokenize(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let root = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(ParseError::Unexpected {
                pos: p.tokens[p.pos].1,
                expected: "end of expression",
            });
        }
        Ok(ExprAst { root, source: src.to_string() })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval_jet(&self, t: Jet2) -> Jet2 {
        eval(&self.root, t)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_jet(Jet2::variable(t)).value
    }

    /// Checks that the expression has a finite second-order jet at `t`.
    pub fn check_defined_at(&self, t: f64) -> Result<(), ParseError> {
        if self.eval_jet(Jet2::variable(t)).is_finite() {
            Ok(())
        } else {
            Err(ParseError::Domain { t })
        }
    }
}

fn eval(n: &Node, t: Jet2) -> Jet2 {
    match n {
        Node::Num(c) => Jet2::constant(*c),
        Node::Var => t,
        Node::Add(a, b) => eval(a, t) + eval(b, t),
        Node::Sub(a, b) => eval(a, t) - eval(b, t),
        Node::Mul(a, b) => eval(a, t) * eval(b, t),
        Node::Div(a, b) => eval(a, t) / eval(b, t),
        // Constant exponents take the powc route so integer powers of any
        // positive base avoid the exp/ln detour.
        Node::Pow(a, b) => match b.as_ref() {
            Node::Num(c) => eval(a, t).powc(*c),
            Node::Neg(inner) => match inner.as_ref() {
                Node::Num(c) => eval(a, t).powc(-c),
                _ => eval(a, t).pow(eval(b, t)),
            },
            _ => eval(a, t).pow(eval(b, t)),
        },
        Node::Neg(a) => -eval(a, t),
        Node::Exp(a) => eval(a, t).exp(),
        Node::Ln(a) => eval(a, t).ln(),
        Node::Sqrt(a) => eval(a, t).sqrt(),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '+' => { out.push((Tok::Plus, i)); i += 1 }
            '-' => { out.push((Tok::Minus, i)); i += 1 }
            '*' => { out.push((Tok::Star, i)); i += 1 }
            '/' => { out.push((Tok::Slash, i)); i += 1 }
            '^' => { out.push((Tok::Caret, i)); i += 1 }
            '(' => { out.push((Tok::LParen, i)); i += 1 }
            ')' => { out.push((Tok::RParen, i)); i += 1 }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i] as char, '0'..='9' | '.') {
                    i += 1;
                }
                // scientific suffix: e.g. 1.5e-3
                if i < bytes.len() && matches!(bytes[i] as char, 'e' | 'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && matches!(bytes[j] as char, '+' | '-') {
                        j += 1;
                    }
                    if j < bytes.len() && (bytes[j] as char).is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let v: f64 = text.parse().map_err(|_| ParseError::BadNumber { pos: start })?;
                out.push((Tok::Num(v), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i] as char, 'a'..='z' | 'A'..='Z' | '0'..='9' | '_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
            }
            _ => return Err(ParseError::UnexpectedChar { ch: c, pos: i }),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map(|(_, p)| *p).unwrap_or(usize::MAX)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        match self.bump() {
            Some(Tok::RParen) => Ok(()),
            Some(_) => Err(ParseError::Unexpected { pos: self.tokens[self.pos - 1].1, expected: "')'" }),
            None => Err(ParseError::UnexpectedEnd),
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Node::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node, ParseError> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Node::Num(v)),
            Some(Tok::Ident(name)) => {
                if name == "t" {
                    return Ok(Node::Var);
                }
                match self.bump() {
                    Some(Tok::LParen) => {}
                    _ => {
                        return Err(ParseError::Unexpected {
                            pos,
                            expected: "'(' after function name (only variable 't' stands alone)",
                        })
                    }
                }
                let arg = self.expr()?;
                self.expect_rparen()?;
                let arg = Box::new(arg);
                match name.as_str() {
                    "exp" => Ok(Node::Exp(arg)),
                    "ln" => Ok(Node::Ln(arg)),
                    "sqrt" => Ok(Node::Sqrt(arg)),
                    _ => Err(ParseError::UnknownFunction { name, pos }),
                }
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Some(_) => Err(ParseError::Unexpected { pos, expected: "number, 't', function call or '('" }),
            None => Err(ParseError::UnexpectedEnd),
        }
    }
}
