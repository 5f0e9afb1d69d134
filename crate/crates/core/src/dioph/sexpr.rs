//! Text form of polynomials.
//!
//! Output is always `(+ (* c (^ v e) ...) ...)` in canonical term order, with
//! `(+)` for the zero polynomial. The reader also accepts bare integers and
//! variables, `(- a b ...)`, unary `(- a)`, nested `(* ...)`, `(+ ...)` and
//! `(^ p e)` with a literal exponent, so hand-written input need not be
//! canonical.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use num_bigint::BigInt;

use super::poly::Polynomial;
use crate::error::{Error, Result};

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(+")?;
        for (m, c) in self.terms() {
            write!(f, " (* {c}")?;
            for (v, e) in m.factors() {
                write!(f, " (^ {v} {e})")?;
            }
            f.write_char(')')?;
        }
        f.write_char(')')
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open,
    Close,
    Atom(String),
}

fn tokenize(s: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in s.chars() {
        if ch == '(' || ch == ')' || ch.is_whitespace() {
            if !cur.is_empty() {
                out.push(Token::Atom(core::mem::take(&mut cur)));
            }
            match ch {
                '(' => out.push(Token::Open),
                ')' => out.push(Token::Close),
                _ => {}
            }
        } else {
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        out.push(Token::Atom(cur));
    }
    out
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self) -> Result<Polynomial> {
        match self.next() {
            Some(Token::Atom(a)) => atom(&a),
            Some(Token::Open) => self.list(),
            Some(Token::Close) => Err(parse_err("unexpected ')'")),
            None => Err(parse_err("unexpected end of input")),
        }
    }

    fn args(&mut self) -> Result<Vec<Polynomial>> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                Some(Token::Close) => {
                    self.pos += 1;
                    return Ok(out);
                }
                None => return Err(parse_err("missing ')'")),
                _ => out.push(self.expr()?),
            }
        }
    }

    fn list(&mut self) -> Result<Polynomial> {
        let op = match self.next() {
            Some(Token::Atom(a)) => a,
            _ => return Err(parse_err("expected an operator after '('")),
        };
        match op.as_str() {
            "+" => Ok(self
                .args()?
                .iter()
                .fold(Polynomial::zero(), |acc, p| acc.add(p))),
            "*" => Ok(self
                .args()?
                .iter()
                .fold(Polynomial::constant(1), |acc, p| acc.mul(p))),
            "-" => {
                let args = self.args()?;
                match args.split_first() {
                    None => Err(parse_err("'-' needs an argument")),
                    Some((first, [])) => Ok(first.neg()),
                    Some((first, rest)) => Ok(rest.iter().fold(first.clone(), |acc, p| acc.sub(p))),
                }
            }
            "^" => {
                let base = self.expr()?;
                let e = match self.next() {
                    Some(Token::Atom(a)) => a
                        .parse::<u32>()
                        .map_err(|_| parse_err(alloc::format!("bad exponent {a:?}")))?,
                    _ => return Err(parse_err("'^' needs a literal exponent")),
                };
                match self.next() {
                    Some(Token::Close) => Ok(base.pow(e)),
                    _ => Err(parse_err("'^' takes exactly two arguments")),
                }
            }
            other => Err(parse_err(alloc::format!("unknown operator {other:?}"))),
        }
    }
}

fn atom(a: &str) -> Result<Polynomial> {
    if let Ok(c) = a.parse::<BigInt>() {
        Ok(Polynomial::constant(c))
    } else if is_ident(a) {
        Ok(Polynomial::var(a))
    } else {
        Err(parse_err(alloc::format!("bad atom {a:?}")))
    }
}

/// Reads one polynomial.
pub fn parse_polynomial(s: &str) -> Result<Polynomial> {
    let mut p = Parser {
        tokens: tokenize(s),
        pos: 0,
    };
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(parse_err("trailing input after polynomial"));
    }
    Ok(out)
}

/// Reads a sequence of polynomials, one equation each.
pub fn parse_system(s: &str) -> Result<Vec<Polynomial>> {
    let mut p = Parser {
        tokens: tokenize(s),
        pos: 0,
    };
    let mut out = Vec::new();
    while p.pos < p.tokens.len() {
        out.push(p.expr()?);
    }
    Ok(out)
}

impl core::str::FromStr for Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_polynomial(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn print_canonical() {
        assert_eq!(Polynomial::zero().to_string(), "(+)");
        assert_eq!(Polynomial::constant(5).to_string(), "(+ (* 5))");
        let p: Polynomial = "(- (^ x 2) (* 3 (^ y 2)) 1)".parse().unwrap();
        assert_eq!(p.to_string(), "(+ (* 1 (^ x 2)) (* -3 (^ y 2)) (* -1))");
    }

    #[test]
    fn roundtrip_and_superset() {
        for s in [
            "(+)",
            "(+ (* 1 (^ x 2)) (* -2 (^ x 1)) (* 1))",
            "(+ (* 4 (^ a 1) (^ b 3)))",
        ] {
            let p: Polynomial = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        let a: Polynomial = "(^ (- x 1) 2)".parse().unwrap();
        let b: Polynomial = "(+ (* x x) (* -2 x) 1)".parse().unwrap();
        assert_eq!(a, b);
        assert_eq!(
            "(- x)".parse::<Polynomial>().unwrap(),
            Polynomial::var("x").neg()
        );
        assert_eq!(parse_system("x (- y 2)").unwrap().len(), 2);
    }

    #[test]
    fn rejects_malformed() {
        for s in [
            "",
            "(+ x",
            "(/ x 2)",
            "(^ x y)",
            "(^ x -1)",
            "x)",
            "(+ 1x)",
            "(^ x 2 3)",
            "()",
        ] {
            assert!(matches!(parse_polynomial(s), Err(Error::Parse(_))), "{s:?}");
        }
    }
}
