//! Total functions `ℕ → ℕ` written as small expressions in `k`.
//!
//! Grammar: `+`, `-` (truncated at zero), `*`, `^` (right associative),
//! postfix `!`, parentheses, decimal literals and the variable `k`
//! (`n` and `j` are accepted as synonyms). A bracketed list `[a, b, …]`
//! is the table `k ↦ list[k]`, undefined past its end.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Results above this many bits are refused.
const MAX_BITS: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Node {
    Lit(BigUint),
    Var,
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Fact(Box<Node>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Body {
    Expr(Node),
    List(Vec<BigUint>),
}

/// A parsed function together with its source text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatFunction {
    source: String,
    body: Body,
}

fn too_big(what: &str) -> Error {
    Error::Overflow(format!("{what} exceeds {MAX_BITS} bits"))
}

fn eval(node: &Node, k: &BigUint) -> Result<BigUint> {
    Ok(match node {
        Node::Lit(v) => v.clone(),
        Node::Var => k.clone(),
        Node::Add(a, b) => eval(a, k)? + eval(b, k)?,
        Node::Sub(a, b) => {
            let (a, b) = (eval(a, k)?, eval(b, k)?);
            if a > b {
                a - b
            } else {
                BigUint::zero()
            }
        }
        Node::Mul(a, b) => {
            let (a, b) = (eval(a, k)?, eval(b, k)?);
            if a.bits() + b.bits() > MAX_BITS {
                return Err(too_big("product"));
            }
            a * b
        }
        Node::Pow(a, b) => {
            let (a, b) = (eval(a, k)?, eval(b, k)?);
            if a <= BigUint::one() || b.is_zero() {
                return Ok(if b.is_zero() { BigUint::one() } else { a });
            }
            let e = b.to_u64().filter(|e| e.saturating_mul(a.bits() - 1) <= MAX_BITS).ok_or_else(|| too_big("power"))?;
            a.pow(e as u32)
        }
        Node::Fact(a) => {
            let a = eval(a, k)?.to_u64().filter(|&a| a <= 50_000).ok_or_else(|| too_big("factorial"))?;
            (1..=a).fold(BigUint::one(), |acc, i| acc * i)
        }
    })
}

impl NatFunction {
    pub fn eval(&self, k: u64) -> Result<BigUint> {
        match &self.body {
            Body::Expr(n) => eval(n, &BigUint::from(k)),
            Body::List(v) => v.get(k as usize).cloned().ok_or(Error::Partial(k)),
        }
    }

    pub fn eval_u64(&self, k: u64) -> Result<u64> {
        self.eval(k)?
            .to_u64()
            .ok_or_else(|| Error::Overflow(format!("{}({k}) does not fit in 64 bits", self.source)))
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

impl fmt::Display for NatFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Tok>,
    pos: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigUint),
    Var,
    Op(char),
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self> {
        let mut toks = Vec::new();
        let mut chars = src.char_indices().peekable();
        while let Some((i, c)) = chars.next() {
            match c {
                c if c.is_whitespace() => {}
                '0'..='9' => {
                    let mut end = i + 1;
                    while let Some(&(j, d)) = chars.peek() {
                        if !d.is_ascii_digit() {
                            break;
                        }
                        end = j + 1;
                        chars.next();
                    }
                    toks.push(Tok::Num(src[i..end].parse().expect("digits")));
                }
                'k' | 'n' | 'j' => toks.push(Tok::Var),
                '+' | '-' | '*' | '^' | '!' | '(' | ')' | '[' | ']' | ',' => toks.push(Tok::Op(c)),
                other => return Err(Self::error_in(src, &format!("unexpected character `{other}`"))),
            }
        }
        Ok(Parser { src, toks, pos: 0 })
    }

    fn error_in(src: &str, reason: &str) -> Error {
        Error::InvalidArgument(format!("cannot parse function `{src}`: {reason}"))
    }

    fn error(&self, reason: &str) -> Error {
        Self::error_in(self.src, reason)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Node> {
        let mut lhs = self.product()?;
        loop {
            if self.eat('+') {
                lhs = Node::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat('-') {
                lhs = Node::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Node> {
        let mut lhs = self.power()?;
        while self.eat('*') {
            lhs = Node::Mul(Box::new(lhs), Box::new(self.power()?));
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.postfix()?;
        if self.eat('^') {
            return Ok(Node::Pow(Box::new(base), Box::new(self.power()?)));
        }
        Ok(base)
    }

    fn postfix(&mut self) -> Result<Node> {
        let mut a = self.atom()?;
        while self.eat('!') {
            a = Node::Fact(Box::new(a));
        }
        Ok(a)
    }

    fn atom(&mut self) -> Result<Node> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Node::Lit(v))
            }
            Some(Tok::Var) => {
                self.pos += 1;
                Ok(Node::Var)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err(self.error("missing `)`"));
                }
                Ok(e)
            }
            _ => Err(self.error("expected a number, `k` or `(`")),
        }
    }

    fn list(&mut self) -> Result<Vec<BigUint>> {
        let mut out = Vec::new();
        loop {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(v)) => {
                    self.pos += 1;
                    out.push(v);
                }
                _ => return Err(self.error("list entries must be literals")),
            }
            if self.eat(']') {
                return Ok(out);
            }
            if !self.eat(',') {
                return Err(self.error("expected `,` or `]`"));
            }
        }
    }
}

impl FromStr for NatFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser::new(s)?;
        let body = if p.eat('[') {
            Body::List(p.list()?)
        } else {
            Body::Expr(p.sum()?)
        };
        if p.pos != p.toks.len() {
            return Err(p.error("trailing input"));
        }
        Ok(NatFunction {
            source: s.trim().to_string(),
            body,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(s: &str, k: u64) -> u64 {
        s.parse::<NatFunction>().unwrap().eval_u64(k).unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(at("2^k", 10), 1024);
        assert_eq!(at("2^3^2", 0), 512);
        assert_eq!(at("1 + 2*k", 4), 9);
        assert_eq!(at("(1 + 2)*k", 4), 12);
        assert_eq!(at("k!", 5), 120);
        assert_eq!(at("k - 10", 3), 0);
        assert_eq!(at("10 - 3 - 2", 0), 5);
        assert_eq!(at("k^2 + 3*k + 1", 2), 11);
    }

    #[test]
    fn lists_are_partial() {
        let f: NatFunction = "[3, 1, 4]".parse().unwrap();
        assert_eq!(f.eval_u64(2).unwrap(), 4);
        assert_eq!(f.eval(3), Err(Error::Partial(3)));
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "2^", "(k", "k k", "x", "[1, k]", "[1,"] {
            assert!(bad.parse::<NatFunction>().is_err(), "{bad}");
        }
        assert!(matches!("2^k".parse::<NatFunction>().unwrap().eval(1 << 30), Err(Error::Overflow(_))));
    }
}
