//! Text grammar for scalars, polynomials, rational functions and operators.
//!
//! Tokens: `x`, `D` (the derivation), `th` (theta = x D), integers, `+ - * /
//! ^ ( )`. Multiplication is operator composition, so the grammar is
//! noncommutative; rational literals like `3/7` fall out of `/` on
//! constants. Division requires the divisor to be an order-0 operator (a
//! rational function). Printing and parsing round-trip.

use crate::poly::UniPoly;
use crate::rat::BigRat;
use crate::ratfunc::RatFunc;
use crate::weyl::DiffOp;
use crate::{Error, Result};
use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    X,
    D,
    Theta,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            'x' => {
                out.push(Tok::X);
                i += 1;
            }
            'D' => {
                out.push(Tok::D);
                i += 1;
            }
            't' => {
                if bytes.get(i + 1) == Some(&b'h') {
                    out.push(Tok::Theta);
                    i += 2;
                } else {
                    return Err(Error::Parse(format!("unexpected character at {i}")));
                }
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = s[start..i]
                    .parse()
                    .map_err(|_| Error::Parse("bad integer".into()))?;
                out.push(Tok::Num(n));
            }
            _ => return Err(Error::Parse(format!("unexpected character '{c}' at {i}"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<DiffOp> {
        let mut negate = false;
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            negate = true;
        } else if self.peek() == Some(&Tok::Plus) {
            self.bump();
        }
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<DiffOp> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let f = self.factor()?;
                    let func = op_as_func(&f).ok_or_else(|| {
                        Error::Parse("division only by order-0 operators".into())
                    })?;
                    if func.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    acc = acc.lmul_func(&func.inv()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<DiffOp> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let Some(Tok::Num(n)) = self.bump() else {
                return Err(Error::Parse("exponent must be a non-negative integer".into()));
            };
            let e = usize::try_from(n).map_err(|_| Error::Parse("exponent too large".into()))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<DiffOp> {
        match self.bump() {
            Some(Tok::Num(n)) => Ok(DiffOp::constant(BigRat::from_integer(n))),
            Some(Tok::X) => Ok(DiffOp::x()),
            Some(Tok::D) => Ok(DiffOp::d()),
            Some(Tok::Theta) => Ok(DiffOp::theta()),
            Some(Tok::Minus) => {
                let a = self.atom()?;
                Ok(-&a)
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                if self.bump() != Some(Tok::RParen) {
                    return Err(Error::Parse("expected ')'".into()));
                }
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn op_as_func(op: &DiffOp) -> Option<RatFunc> {
    match op.order() {
        None => Some(RatFunc::zero()),
        Some(0) => Some(op.coeff(0)),
        _ => None,
    }
}

/// Parse an operator expression over `x`, `D`, `th`.
pub fn parse_op(s: &str) -> Result<DiffOp> {
    let toks = lex(s)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse("trailing input".into()));
    }
    Ok(e)
}

/// Parse a rational function (an order-0 operator expression).
pub fn parse_ratfunc(s: &str) -> Result<RatFunc> {
    let op = parse_op(s)?;
    op_as_func(&op).ok_or_else(|| Error::Parse("expected a rational function, found D".into()))
}

/// Parse a polynomial.
pub fn parse_poly(s: &str) -> Result<UniPoly> {
    let f = parse_ratfunc(s)?;
    f.as_poly()
        .cloned()
        .ok_or_else(|| Error::Parse("expected a polynomial, found a denominator".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rint};

    #[test]
    fn parses_rationals_and_powers() {
        assert_eq!(
            parse_ratfunc("3/7").unwrap(),
            RatFunc::constant(rat(3, 7))
        );
        assert_eq!(
            parse_poly("x^2 - 2*x + 1").unwrap(),
            UniPoly::from_i64(&[1, -2, 1])
        );
        assert_eq!(
            parse_ratfunc("(x^2-1)/(x-1)").unwrap(),
            RatFunc::from_poly(UniPoly::from_i64(&[1, 1]))
        );
    }

    #[test]
    fn operator_grammar_is_noncommutative() {
        let dx = parse_op("D*x").unwrap();
        let xd = parse_op("x*D").unwrap();
        assert_eq!(&dx - &xd, DiffOp::one());
        assert_eq!(parse_op("th").unwrap(), DiffOp::theta());
    }

    #[test]
    fn print_parse_roundtrip() {
        let op = parse_op("x^3*(x-1)^3*D^6 + (2*x - 5/3)*D + 7").unwrap();
        let printed = format!("{op}");
        let reparsed = parse_op(&printed).unwrap();
        assert_eq!(reparsed, op);
    }

    #[test]
    fn poly_print_parse_roundtrip() {
        let p = UniPoly::new(vec![rat(-1, 2), rint(0), rint(3), rat(7, 5)]);
        let printed = format!("{p}");
        assert_eq!(parse_poly(&printed).unwrap(), p);
    }
}
