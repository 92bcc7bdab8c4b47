//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' INTEGER)?
//! atom    := INTEGER ('/' INTEGER)? | IDENT | '(' sum ')'
//! ```
//!
//! Multiplication must be written out: `2*x`, never `2x`. Exponents are
//! non-negative integer literals. `1/2` is a single rational literal; there is
//! no general division operator.

use std::iter::Peekable;
use std::str::CharIndices;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::poly::{Poly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unknown identifier `{name}` at {position}")]
    UnknownIdentifier { name: String, position: usize },
    #[error("malformed exponent at {position}: {reason}")]
    MalformedExponent {
        position: usize,
        reason: &'static str,
    },
    #[error("unbalanced parentheses at {position}")]
    UnbalancedParentheses { position: usize },
    #[error("unexpected {found} at {position}")]
    UnexpectedToken { found: String, position: usize },
    #[error("unexpected end of input at {position}")]
    UnexpectedEnd { position: usize },
    #[error("invalid character `{ch}` at {position}")]
    InvalidCharacter { ch: char, position: usize },
    #[error("zero denominator at {position}")]
    ZeroDenominator { position: usize },
}

impl ParseError {
    /// Byte offset into the source where the problem was detected.
    pub fn position(&self) -> usize {
        match self {
            ParseError::UnknownIdentifier { position, .. }
            | ParseError::MalformedExponent { position, .. }
            | ParseError::UnbalancedParentheses { position }
            | ParseError::UnexpectedToken { position, .. }
            | ParseError::UnexpectedEnd { position }
            | ParseError::InvalidCharacter { position, .. }
            | ParseError::ZeroDenominator { position } => *position,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Int(n) => format!("number `{n}`"),
            Token::Ident(s) => format!("identifier `{s}`"),
            Token::Plus => "`+`".into(),
            Token::Minus => "`-`".into(),
            Token::Star => "`*`".into(),
            Token::Slash => "`/`".into(),
            Token::Caret => "`^`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut chars: Peekable<CharIndices> = src.char_indices().peekable();
    while let Some(&(pos, ch)) = chars.peek() {
        if ch.is_whitespace() {
            chars.next();
            continue;
        }
        if ch.is_ascii_digit() {
            let mut end = pos;
            while let Some(&(p, c)) = chars.peek() {
                if !c.is_ascii_digit() {
                    break;
                }
                end = p + c.len_utf8();
                chars.next();
            }
            let n: BigInt = src[pos..end].parse().expect("ascii digits");
            out.push((Token::Int(n), pos));
            continue;
        }
        if ch.is_ascii_alphabetic() || ch == '_' {
            let mut end = pos;
            while let Some(&(p, c)) = chars.peek() {
                if !(c.is_ascii_alphanumeric() || c == '_') {
                    break;
                }
                end = p + c.len_utf8();
                chars.next();
            }
            out.push((Token::Ident(src[pos..end].to_string()), pos));
            continue;
        }
        let tok = match ch {
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            _ => return Err(ParseError::InvalidCharacter { ch, position: pos }),
        };
        out.push((tok, pos));
        chars.next();
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<(Token, usize)> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn sum(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    acc = &acc + &self.product()?;
                }
                Some(Token::Minus) => {
                    self.bump();
                    acc = &acc - &self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        while let Some(Token::Star) = self.peek() {
            self.bump();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        if let Some(Token::Minus) = self.peek() {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if let Some(Token::Caret) = self.peek() {
            self.bump();
            let position = self.offset();
            let exp = match self.bump() {
                Some((Token::Int(n), _)) => {
                    u32::try_from(n).map_err(|_| ParseError::MalformedExponent {
                        position,
                        reason: "exponent too large",
                    })?
                }
                Some(_) | None => {
                    return Err(ParseError::MalformedExponent {
                        position,
                        reason: "expected a non-negative integer literal",
                    })
                }
            };
            if let Some(Token::Caret) = self.peek() {
                return Err(ParseError::MalformedExponent {
                    position: self.offset(),
                    reason: "chained exponents need parentheses",
                });
            }
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        let position = self.offset();
        match self.bump() {
            Some((Token::Int(n), _)) => {
                if let Some(Token::Slash) = self.peek() {
                    self.bump();
                    let den_pos = self.offset();
                    match self.bump() {
                        Some((Token::Int(d), _)) => {
                            if d.is_zero() {
                                return Err(ParseError::ZeroDenominator { position: den_pos });
                            }
                            Ok(Poly::constant(self.nvars(), Rational::new(n, d)))
                        }
                        Some((t, p)) => Err(ParseError::UnexpectedToken {
                            found: t.describe(),
                            position: p,
                        }),
                        None => Err(ParseError::UnexpectedEnd { position: den_pos }),
                    }
                } else {
                    Ok(Poly::constant(self.nvars(), Rational::from_integer(n)))
                }
            }
            Some((Token::Ident(name), p)) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => Ok(Poly::var(self.nvars(), i)),
                None => Err(ParseError::UnknownIdentifier { name, position: p }),
            },
            Some((Token::LParen, open)) => {
                let inner = self.sum()?;
                match self.bump() {
                    Some((Token::RParen, _)) => Ok(inner),
                    Some((t, p)) => Err(ParseError::UnexpectedToken {
                        found: t.describe(),
                        position: p,
                    }),
                    None => Err(ParseError::UnbalancedParentheses { position: open }),
                }
            }
            Some((Token::RParen, p)) => Err(ParseError::UnbalancedParentheses { position: p }),
            Some((t, p)) => Err(ParseError::UnexpectedToken {
                found: t.describe(),
                position: p,
            }),
            None => Err(ParseError::UnexpectedEnd { position }),
        }
    }
}

/// Parses `src` as a polynomial in the variables `vars`.
pub fn parse_poly(src: &str, vars: &[String]) -> Result<Poly, ParseError> {
    let tokens = tokenize(src)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: src.len(),
        vars,
    };
    let p = parser.sum()?;
    match parser.bump() {
        None => Ok(p),
        Some((Token::RParen, position)) => Err(ParseError::UnbalancedParentheses { position }),
        Some((t, position)) => Err(ParseError::UnexpectedToken {
            found: t.describe(),
            position,
        }),
    }
}
