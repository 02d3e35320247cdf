//! Parser for the formula surface syntax.
//!
//! Grammar (lowest precedence first; `&` and `|` associate left, `->`
//! associates right, `~` binds tightest):
//!
//! ```text
//! formula ::= or ( "->" formula )?
//! or      ::= and ( "|" and )*
//! and     ::= unary ( "&" unary )*
//! unary   ::= "~" unary | "T" | atom | "(" formula ")"
//! atom    ::= [a-z][a-z0-9_]*
//! ```
//!
//! The Unicode connectives `¬ ∧ ∨ →` and the constant `⊤` are accepted
//! as aliases for `~ & | -> T`. Whitespace separates tokens and is
//! otherwise ignored. Errors report the byte offset of the offending
//! input together with what was expected there.

use std::fmt;

use thiserror::Error;

use crate::formula::Formula;

/// A syntax error at a byte offset of the input.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("syntax error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Token {
    Atom(String),
    Top,
    Neg,
    And,
    Or,
    Imp,
    LParen,
    RParen,
}

impl fmt::Display for Token {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Atom(name) => write!(out, "atom '{name}'"),
            Token::Top => out.write_str("'T'"),
            Token::Neg => out.write_str("'~'"),
            Token::And => out.write_str("'&'"),
            Token::Or => out.write_str("'|'"),
            Token::Imp => out.write_str("'->'"),
            Token::LParen => out.write_str("'('"),
            Token::RParen => out.write_str("')'"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(offset, c)) = chars.peek() {
        match c {
            _ if c.is_whitespace() => {
                chars.next();
            }
            '(' => {
                chars.next();
                tokens.push((offset, Token::LParen));
            }
            ')' => {
                chars.next();
                tokens.push((offset, Token::RParen));
            }
            '~' | '¬' => {
                chars.next();
                tokens.push((offset, Token::Neg));
            }
            '&' | '∧' => {
                chars.next();
                tokens.push((offset, Token::And));
            }
            '|' | '∨' => {
                chars.next();
                tokens.push((offset, Token::Or));
            }
            '→' => {
                chars.next();
                tokens.push((offset, Token::Imp));
            }
            '-' => {
                chars.next();
                match chars.peek() {
                    Some(&(_, '>')) => {
                        chars.next();
                        tokens.push((offset, Token::Imp));
                    }
                    _ => {
                        return Err(ParseError {
                            offset,
                            message: "expected '->' after '-'".to_string(),
                        })
                    }
                }
            }
            'T' | '⊤' => {
                chars.next();
                tokens.push((offset, Token::Top));
            }
            'a'..='z' => {
                let mut name = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' {
                        name.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push((offset, Token::Atom(name)));
            }
            _ => {
                return Err(ParseError {
                    offset,
                    message: format!("unexpected character {c:?}"),
                })
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    /// Byte length of the input, used as the offset of "end of input".
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        let found = match self.peek() {
            Some(t) => format!("found {t}"),
            None => "found end of input".to_string(),
        };
        ParseError {
            offset: self.offset(),
            message: format!("expected {expected}, {found}"),
        }
    }

    /// formula ::= or ( "->" formula )?
    fn formula(&mut self) -> Result<Formula, ParseError> {
        let left = self.or()?;
        if self.peek() == Some(&Token::Imp) {
            self.bump();
            let right = self.formula()?;
            return Ok(Formula::imp(left, right));
        }
        Ok(left)
    }

    /// or ::= and ( "|" and )*
    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.and()?;
        while self.peek() == Some(&Token::Or) {
            self.bump();
            let next = self.and()?;
            acc = Formula::or(acc, next);
        }
        Ok(acc)
    }

    /// and ::= unary ( "&" unary )*
    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.bump();
            let next = self.unary()?;
            acc = Formula::and(acc, next);
        }
        Ok(acc)
    }

    /// unary ::= "~" unary | "T" | atom | "(" formula ")"
    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Token::Neg) => {
                self.bump();
                Ok(Formula::neg(self.unary()?))
            }
            Some(Token::Top) => {
                self.bump();
                Ok(Formula::Top)
            }
            Some(Token::Atom(_)) => match self.bump() {
                Some(Token::Atom(name)) => Ok(Formula::Atom(name)),
                _ => unreachable!("peeked an atom"),
            },
            Some(Token::LParen) => {
                self.bump();
                let inner = self.formula()?;
                if self.peek() == Some(&Token::RParen) {
                    self.bump();
                    Ok(inner)
                } else {
                    Err(self.error("')'"))
                }
            }
            _ => Err(self.error("an atom, 'T', '~', or '('")),
        }
    }
}

/// Parses the canonical formula syntax described in the module docs.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let f = parser.formula()?;
    if parser.peek().is_some() {
        return Err(parser.error("end of input"));
    }
    Ok(f)
}
