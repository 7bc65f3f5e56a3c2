//! Recursive-descent parser for polynomial text.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := number | 'x' | 'y' | '(' expr ')'
//! ```
//!
//! Numbers may be integers or decimals and are converted exactly. Division is
//! only allowed by a nonzero constant.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{BivariatePolynomial, PolyError, Rational, MAX_DEGREE};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(Rational),
    X,
    Y,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>, PolyError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Token::Plus,
            '-' | '\u{2212}' => Token::Minus,
            '*' | '\u{00b7}' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            'x' | 'X' => Token::X,
            'y' | 'Y' => Token::Y,
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push((start, Token::Num(parse_decimal(&text, start)?)));
                continue;
            }
            other => {
                return Err(PolyError::Parse {
                    pos: i,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

/// Exact conversion of a decimal literal such as `12`, `0.5` or `3.`.
pub fn parse_decimal(text: &str, pos: usize) -> Result<Rational, PolyError> {
    let bad = || PolyError::Parse {
        pos,
        msg: format!("malformed number '{text}'"),
    };
    let (int_part, frac_part) = match text.split_once('.') {
        Some((a, b)) => (a, b),
        None => (text, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() || frac_part.contains('.') {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().map_err(|_| bad())?;
    let denom = num_traits::pow::pow(BigInt::from(10), frac_part.len());
    Ok(Rational::new(numer, denom))
}

/// Parse a rational literal `n`, `-n/d` or a decimal.
pub fn parse_rational(text: &str) -> Result<Rational, PolyError> {
    let p = parse_polynomial(text)?;
    if !p.is_constant() {
        return Err(PolyError::Parse {
            pos: 0,
            msg: format!("expected a rational constant, got '{text}'"),
        });
    }
    Ok(p.coeff(0, 0))
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(o, _)| *o)
            .unwrap_or(self.len)
    }

    fn err(&self, msg: impl Into<String>) -> PolyError {
        PolyError::Parse {
            pos: self.offset(),
            msg: msg.into(),
        }
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn check_degree(&self, p: BivariatePolynomial) -> Result<BivariatePolynomial, PolyError> {
        if p.degree() > MAX_DEGREE as i64 {
            return Err(PolyError::DegreeTooHigh {
                degree: p.degree() as u32,
                max: MAX_DEGREE,
            });
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<BivariatePolynomial, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Token::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BivariatePolynomial, PolyError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = self.check_degree(&acc * &rhs)?;
                }
                Some(Token::Slash) => {
                    self.bump();
                    let rhs = self.unary()?;
                    if !rhs.is_constant() {
                        return Err(self.err("division is only allowed by a constant"));
                    }
                    let c = rhs.coeff(0, 0);
                    if c.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    acc = acc.scale(&(Rational::one() / c));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<BivariatePolynomial, PolyError> {
        match self.peek() {
            Some(Token::Minus) => {
                self.bump();
                Ok(-self.unary()?)
            }
            Some(Token::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<BivariatePolynomial, PolyError> {
        let base = self.atom()?;
        if let Some(Token::Caret) = self.peek() {
            self.bump();
            let e = match self.bump() {
                Some(Token::Num(n)) if n.is_integer() => n.to_integer(),
                _ => return Err(self.err("exponent must be a nonnegative integer")),
            };
            let e: u32 = e
                .try_into()
                .ok()
                .filter(|e| *e <= 1024)
                .ok_or_else(|| self.err("exponent out of range"))?;
            let degree = base.degree().max(0) * e as i64;
            if degree > MAX_DEGREE as i64 {
                return Err(PolyError::DegreeTooHigh {
                    degree: degree as u32,
                    max: MAX_DEGREE,
                });
            }
            if base.is_constant() && e > 64 {
                return Err(self.err("exponent of a constant out of range"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<BivariatePolynomial, PolyError> {
        match self.bump() {
            Some(Token::Num(n)) => Ok(BivariatePolynomial::constant(n)),
            Some(Token::X) => Ok(BivariatePolynomial::x()),
            Some(Token::Y) => Ok(BivariatePolynomial::y()),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => {
                        self.pos -= 1;
                        Err(self.err("expected ')'"))
                    }
                }
            }
            Some(_) => {
                self.pos -= 1;
                Err(self.err("expected a number, 'x', 'y' or '('"))
            }
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parse polynomial text into expanded canonical form.
pub fn parse_polynomial(src: &str) -> Result<BivariatePolynomial, PolyError> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(PolyError::Parse {
            pos: 0,
            msg: "empty polynomial".into(),
        });
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        len: src.len(),
    };
    let p = parser.expr()?;
    if parser.pos < parser.tokens.len() {
        return Err(parser.err("trailing input"));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfield::poly::{int, rational};

    #[test]
    fn expands_parenthesized_products() {
        let p = parse_polynomial("-x*(x^2-1)^2").unwrap();
        assert_eq!(p.to_string(), "-x^5+2*x^3-x");
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        let p = parse_polynomial("-x^2").unwrap();
        assert_eq!(p.coeff(2, 0), int(-1));
    }

    #[test]
    fn rational_and_decimal_coefficients() {
        let p = parse_polynomial("1/2*x + 0.25*y - 3").unwrap();
        assert_eq!(p.coeff(1, 0), rational(1, 2));
        assert_eq!(p.coeff(0, 1), rational(1, 4));
        assert_eq!(p.coeff(0, 0), int(-3));
        let q = parse_polynomial("(y-x/2)").unwrap();
        assert_eq!(q.coeff(1, 0), rational(-1, 2));
    }

    #[test]
    fn unicode_minus_accepted() {
        let p = parse_polynomial("\u{2212}x").unwrap();
        assert_eq!(p.coeff(1, 0), int(-1));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_polynomial("").is_err());
        assert!(parse_polynomial("x +").is_err());
        assert!(parse_polynomial("x / y").is_err());
        assert!(parse_polynomial("x / 0").is_err());
        assert!(parse_polynomial("(x").is_err());
        assert!(parse_polynomial("z").is_err());
        assert!(parse_polynomial("x^-1").is_err());
        assert!(parse_polynomial("1.2.3").is_err());
    }

    #[test]
    fn degree_cap_enforced() {
        assert!(matches!(
            parse_polynomial("x^33"),
            Err(PolyError::DegreeTooHigh { .. })
        ));
        assert!(matches!(
            parse_polynomial("(x^2+y)^17"),
            Err(PolyError::DegreeTooHigh { .. })
        ));
        assert!(parse_polynomial("x^32").is_ok());
    }

    #[test]
    fn canonical_text_round_trips() {
        for src in ["y", "-x^5+2*x^3-x", "1/2*x^2*y-7/3", "x*y^2+3*y^3-y+1", "0"] {
            let p = parse_polynomial(src).unwrap();
            assert_eq!(p.to_string(), src);
        }
    }
}
