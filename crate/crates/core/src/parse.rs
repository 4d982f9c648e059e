//! Tiny recursive-descent parser for expressions such as `c^2*w - 1/2*x1*x2`.
//!
//! Grammar:
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-')* atom
//! atom   := int ['/' int] | name ['^' int] | '(' expr ')' ['^' int]
//! ```
//! Names are `[A-Za-z_][A-Za-z0-9_.']*`.

use num::{BigInt, One};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Target of parsing. Multiplication may fail (e.g. in a vector space).
pub trait ExprContext {
    type Value: Clone;
    fn scalar(&self, q: Rational) -> Self::Value;
    fn atom(&self, name: &str) -> Result<Self::Value>;
    fn add(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value>;
    fn mul(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value>;
    fn mul_scalar(&self, a: Self::Value, q: Rational) -> Self::Value;
    fn neg(&self, a: Self::Value) -> Self::Value {
        self.mul_scalar(a, -Rational::one())
    }
}

/// Context for parsing: the algebra's constructors live on `ctx`.
pub fn parse_expr<A: ExprContext>(ctx: &A, input: &str) -> Result<A::Value> {
    let tokens = tokenize(input)?;
    if tokens.is_empty() {
        return Err(Error::Parse(format!("empty expression {input:?}")));
    }
    let mut p = Parser { tokens, pos: 0, input };
    let v = p.expr(ctx)?;
    if p.pos != p.tokens.len() {
        return Err(p.error("trailing input"));
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' | '\u{2212}' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' | '\u{00b7}' => {
                out.push(Tok::Star);
                i += 1
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push(Tok::Int(digits.parse().unwrap()));
            }
            a if a.is_alphabetic() || a == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || matches!(chars[i], '_' | '.' | '\'')) {
                    i += 1;
                }
                out.push(Tok::Name(chars[start..i].iter().collect()));
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?} in {s:?}"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Tok>,
    pos: usize,
    input: &'a str,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at token {} in {:?}", self.pos, self.input))
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr<A: ExprContext>(&mut self, ctx: &A) -> Result<A::Value> {
        let mut acc = self.term(ctx)?;
        loop {
            if self.eat(&Tok::Plus) {
                let t = self.term(ctx)?;
                acc = ctx.add(acc, t)?;
            } else if self.eat(&Tok::Minus) {
                let t = self.term(ctx)?;
                acc = ctx.add(acc, ctx.neg(t))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<A: ExprContext>(&mut self, ctx: &A) -> Result<A::Value> {
        let mut acc = self.unary(ctx)?;
        while self.eat(&Tok::Star) {
            let f = self.unary(ctx)?;
            acc = ctx.mul(acc, f)?;
        }
        Ok(acc)
    }

    fn unary<A: ExprContext>(&mut self, ctx: &A) -> Result<A::Value> {
        if self.eat(&Tok::Minus) {
            let v = self.unary(ctx)?;
            return Ok(ctx.neg(v));
        }
        if self.eat(&Tok::Plus) {
            return self.unary(ctx);
        }
        self.atom(ctx)
    }

    fn exponent(&mut self) -> Result<Option<u32>> {
        if !self.eat(&Tok::Caret) {
            return Ok(None);
        }
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let e: u32 = n.try_into().map_err(|_| self.error("exponent too large"))?;
                Ok(Some(e))
            }
            _ => Err(self.error("expected a non-negative integer exponent")),
        }
    }

    fn atom<A: ExprContext>(&mut self, ctx: &A) -> Result<A::Value> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let mut q = Rational::from_integer(n);
                if self.eat(&Tok::Slash) {
                    match self.peek().cloned() {
                        Some(Tok::Int(d)) if d != BigInt::from(0) => {
                            self.pos += 1;
                            q /= Rational::from_integer(d);
                        }
                        _ => return Err(self.error("expected a nonzero denominator")),
                    }
                }
                Ok(ctx.scalar(q))
            }
            Some(Tok::Name(name)) => {
                self.pos += 1;
                let base = ctx.atom(&name)?;
                self.power(ctx, base)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let v = self.expr(ctx)?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.error("expected ')'"));
                }
                self.power(ctx, v)
            }
            _ => Err(self.error("expected a number, a name or '('")),
        }
    }

    fn power<A: ExprContext>(&mut self, ctx: &A, base: A::Value) -> Result<A::Value> {
        match self.exponent()? {
            None => Ok(base),
            Some(e) => {
                let mut acc = ctx.scalar(Rational::one());
                for _ in 0..e {
                    acc = ctx.mul(acc, base.clone())?;
                }
                Ok(acc)
            }
        }
    }
}
