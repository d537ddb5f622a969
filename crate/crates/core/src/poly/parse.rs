//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr     := sign? term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' uint)?
//! base     := rational | var | '(' expr ')'
//! rational := int ('/' uint)?
//! ```
//!
//! `/` is only accepted between two integer literals. There is no implicit
//! multiplication.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use super::Polynomial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("undeclared variable `{name}` at position {pos}")]
    UndeclaredVariable { name: String, pos: usize },
    #[error("negative exponent at position {pos}")]
    NegativeExponent { pos: usize },
    #[error("exponent at position {pos} is not a nonnegative integer")]
    NonIntegerExponent { pos: usize },
    #[error("division by zero in rational literal at position {pos}")]
    ZeroDenominator { pos: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Dot,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut toks = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, ch) = chars[i];
        if ch.is_whitespace() {
            i += 1;
            continue;
        }
        if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let end = chars.get(i).map_or(text.len(), |c| c.0);
            let digits = &text[chars[start].0..end];
            toks.push((pos, Tok::Int(digits.parse().expect("digit run"))));
            continue;
        }
        if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let end = chars.get(i).map_or(text.len(), |c| c.0);
            toks.push((pos, Tok::Ident(text[chars[start].0..end].to_string())));
            continue;
        }
        let t = match ch {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '.' => Tok::Dot,
            other => {
                return Err(ParseError::Syntax {
                    pos,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        toks.push((pos, t));
        i += 1;
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let negate = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                true
            }
            Some(Tok::Plus) => {
                self.bump();
                false
            }
            _ => false,
        };
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
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

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.base()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let pos = self.pos();
            let k = match self.bump() {
                Some(Tok::Int(k)) => k,
                Some(Tok::Minus) => return Err(ParseError::NegativeExponent { pos }),
                Some(Tok::LParen) => return Err(ParseError::NonIntegerExponent { pos }),
                _ => {
                    self.at -= 1;
                    return self.syntax("expected an exponent after `^`");
                }
            };
            if matches!(self.peek(), Some(Tok::Dot) | Some(Tok::Slash)) {
                return Err(ParseError::NonIntegerExponent { pos });
            }
            let k: u32 = k.try_into().map_err(|_| ParseError::Syntax {
                pos,
                msg: "exponent too large".into(),
            })?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Polynomial, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => {
                let value = if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    let dpos = self.pos();
                    match self.bump() {
                        Some(Tok::Int(d)) if d.is_zero() => {
                            return Err(ParseError::ZeroDenominator { pos: dpos })
                        }
                        Some(Tok::Int(d)) => BigRational::new(n, d),
                        _ => {
                            self.at -= 1;
                            return self.syntax("`/` is only allowed between integer literals");
                        }
                    }
                } else {
                    BigRational::from_integer(n)
                };
                if let Some(Tok::Dot) = self.peek() {
                    return self.syntax("decimal literals are not supported; write a rational like 3/2");
                }
                if let Some(Tok::Slash) = self.peek() {
                    return self.syntax("`/` is only allowed between integer literals");
                }
                Ok(Polynomial::constant(self.vars, value))
            }
            Some(Tok::Ident(name)) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => {
                    if let Some(Tok::Slash) = self.peek() {
                        return self.syntax("`/` is only allowed between integer literals");
                    }
                    Ok(Polynomial::var(self.vars, i).expect("index from position"))
                }
                None => Err(ParseError::UndeclaredVariable { name, pos }),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => {
                        if let Some(Tok::Slash) = self.peek() {
                            return self.syntax("`/` is only allowed between integer literals");
                        }
                        Ok(inner)
                    }
                    _ => {
                        self.at -= 1;
                        self.syntax("expected `)`")
                    }
                }
            }
            Some(_) => {
                self.at -= 1;
                self.syntax("expected a number, variable or `(`")
            }
            None => self.syntax("unexpected end of input"),
        }
    }
}

/// Parses `text` as a polynomial in the declared variables.
pub fn parse_polynomial(text: &str, vars: &[String]) -> Result<Polynomial, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        vars,
    };
    let out = p.expr()?;
    if p.at < p.toks.len() {
        return p.syntax(match p.peek() {
            Some(Tok::Ident(_)) | Some(Tok::Int(_)) | Some(Tok::LParen) => {
                "implicit multiplication is not supported; use `*`"
            }
            _ => "unexpected trailing input",
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn delannoy_denominator() {
        let p = parse_polynomial("1 - x - y - x*y", &xy()).unwrap();
        assert_eq!(p.num_terms(), 4);
        assert_eq!(p.coefficient(&[0, 0]), q(1, 1));
        assert_eq!(p.coefficient(&[1, 0]), q(-1, 1));
        assert_eq!(p.coefficient(&[0, 1]), q(-1, 1));
        assert_eq!(p.coefficient(&[1, 1]), q(-1, 1));
    }

    #[test]
    fn zigzag_denominator() {
        let p = parse_polynomial("1 - x - y + x*y - x^2*y^2", &xy()).unwrap();
        assert_eq!(p.num_terms(), 5);
        assert_eq!(p.coefficient(&[2, 2]), q(-1, 1));
    }

    #[test]
    fn alignments_denominator_expands() {
        let p = parse_polynomial("1 - (1/2)*(1+x)*(1+y)", &xy()).unwrap();
        assert_eq!(p.num_terms(), 4);
        assert_eq!(p.coefficient(&[0, 0]), q(1, 2));
        assert_eq!(p.coefficient(&[1, 0]), q(-1, 2));
        assert_eq!(p.coefficient(&[0, 1]), q(-1, 2));
        assert_eq!(p.coefficient(&[1, 1]), q(-1, 2));
    }

    #[test]
    fn leading_sign_and_whitespace() {
        let a = parse_polynomial("  -x+   y ", &xy()).unwrap();
        let b = parse_polynomial("y - x", &xy()).unwrap();
        assert_eq!(a, b);
        let c = parse_polynomial("(x - y)^2 - (x^2 - 2*x*y + y^2)", &xy()).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_polynomial("1 - z", &xy()),
            Err(ParseError::UndeclaredVariable { ref name, pos: 4 }) if name == "z"
        ));
        assert!(matches!(
            parse_polynomial("x^-1", &xy()),
            Err(ParseError::NegativeExponent { pos: 2 })
        ));
        assert!(matches!(
            parse_polynomial("x^1.5", &xy()),
            Err(ParseError::NonIntegerExponent { .. })
        ));
        assert!(matches!(
            parse_polynomial("x^(1/2)", &xy()),
            Err(ParseError::NonIntegerExponent { .. })
        ));
        assert!(matches!(
            parse_polynomial("x/2", &xy()),
            Err(ParseError::Syntax { pos: 1, .. })
        ));
        assert!(matches!(
            parse_polynomial("2 x", &xy()),
            Err(ParseError::Syntax { pos: 2, .. })
        ));
        assert!(matches!(
            parse_polynomial("(1 + x", &xy()),
            Err(ParseError::Syntax { pos: 6, .. })
        ));
        assert!(matches!(
            parse_polynomial("1/0", &xy()),
            Err(ParseError::ZeroDenominator { pos: 2 })
        ));
        assert!(matches!(
            parse_polynomial("1 + ", &xy()),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_polynomial("1.5*x", &xy()),
            Err(ParseError::Syntax { pos: 1, .. })
        ));
    }
}
