//! Precedence-climbing parser for polynomial expressions in one variable.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*')? unary)*      implicit product only before a variable or '('
//! unary   := ('-' | '+') unary | power
//! power   := atom ('^' exponent)?       right-associative
//! atom    := integer | variable | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{IntPoly, PolyError};

const MAX_EXPONENT: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Decimal,
    Var(char),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn syntax(position: usize, message: impl Into<String>) -> PolyError {
    PolyError::SyntaxError {
        position,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                if i < chars.len() && chars[i] == '.' {
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    out.push((start, Tok::Decimal));
                    continue;
                }
                out.push((start, Tok::Int(digits.parse().expect("ascii digits"))));
                continue;
            }
            '.' => {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Decimal));
                continue;
            }
            c if c.is_ascii_alphabetic() => Tok::Var(c),
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => return Err(syntax(start, format!("unexpected character {other:?}"))),
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    variable: Option<char>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<IntPoly, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<IntPoly, PolyError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Var(_)) | Some(Tok::LParen) => {
                    acc = &acc * &self.power()?;
                }
                Some(Tok::Int(_)) | Some(Tok::Decimal) => {
                    return Err(syntax(
                        self.here(),
                        "a number cannot follow a factor without '*'",
                    ));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<IntPoly, PolyError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<IntPoly, PolyError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let e = self.exponent()?;
        Ok(pow(&base, e))
    }

    /// A nonnegative integer constant, possibly itself a power tower.
    fn exponent(&mut self) -> Result<u64, PolyError> {
        let at = self.here();
        let unsupported = |message: &str| PolyError::UnsupportedExponent {
            position: at,
            message: message.to_string(),
        };
        let value = match self.peek() {
            Some(Tok::Minus) => return Err(unsupported("exponent must be nonnegative")),
            Some(Tok::Decimal) => return Err(unsupported("exponent must be an integer")),
            Some(Tok::Var(_)) => return Err(unsupported("exponent must be a constant")),
            Some(Tok::Plus) => {
                self.bump();
                return self.exponent();
            }
            Some(Tok::Int(_)) | Some(Tok::LParen) => {
                let base = self.atom()?;
                let b = constant_value(&base)
                    .ok_or_else(|| unsupported("exponent must be a constant"))?;
                if self.peek() == Some(&Tok::Caret) {
                    self.bump();
                    let e = self.exponent()?;
                    if b.sign() == num_bigint::Sign::Minus {
                        return Err(unsupported("exponent must be nonnegative"));
                    }
                    num_traits::pow(
                        b,
                        usize::try_from(e).map_err(|_| unsupported("exponent too large"))?,
                    )
                } else {
                    b
                }
            }
            _ => return Err(syntax(at, "expected an exponent")),
        };
        if value.sign() == num_bigint::Sign::Minus {
            return Err(unsupported("exponent must be nonnegative"));
        }
        match value.to_u64() {
            Some(e) if e <= MAX_EXPONENT => Ok(e),
            _ => Err(unsupported("exponent too large")),
        }
    }

    fn atom(&mut self) -> Result<IntPoly, PolyError> {
        let at = self.here();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(IntPoly::constant(n)),
            Some(Tok::Decimal) => Err(syntax(at, "only integer literals are allowed")),
            Some(Tok::Var(v)) => match self.variable {
                Some(w) if w != v => Err(syntax(
                    at,
                    format!("second variable {v:?}; the expression already uses {w:?}"),
                )),
                _ => {
                    self.variable = Some(v);
                    Ok(IntPoly::x())
                }
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let close = self.here();
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(syntax(close, "expected ')'")),
                }
            }
            Some(_) => Err(syntax(at, "expected a number, variable or '('")),
            None => Err(syntax(at, "unexpected end of input")),
        }
    }
}

fn constant_value(p: &IntPoly) -> Option<BigInt> {
    match p.degree() {
        None => Some(BigInt::zero()),
        Some(0) => Some(p.coeff(0)),
        _ => None,
    }
}

fn pow(base: &IntPoly, mut e: u64) -> IntPoly {
    let mut result = IntPoly::one();
    let mut square = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &square;
        }
        e >>= 1;
        if e > 0 {
            square = &square * &square;
        }
    }
    result
}

/// Parses and expands an expression such as `"(x^2-x-1)*(x^2+x-1)"`.
///
/// Positions in errors are 0-based character offsets.
pub fn parse_poly(text: &str) -> Result<IntPoly, PolyError> {
    let toks = tokenize(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.chars().count(),
        variable: None,
    };
    let poly = parser.expr()?;
    if parser.pos < parser.toks.len() {
        return Err(syntax(parser.here(), "unexpected trailing input"));
    }
    Ok(poly)
}
