//! Term grammar:
//!
//! ```text
//! sum     := product ('+' product)*
//! product := postfix ('.'? postfix)*
//! postfix := atom '*'*
//! atom    := '0' | '1' | identifier | '(' sum ')'
//! ```

use thiserror::Error;

use super::Term;
use crate::alphabet::{CommutableSet, Symbol};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character `{ch}` at offset {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unknown symbol `{name}` at offset {pos}")]
    UnknownSymbol { name: String, pos: usize },
    #[error("expected `)` at offset {0}")]
    UnclosedParen(usize),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Zero,
    One,
    Ident(String),
    Plus,
    Dot,
    Star,
    Open,
    Close,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let bytes: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '.' | '·' => Tok::Dot,
            '*' => Tok::Star,
            '(' => Tok::Open,
            ')' => Tok::Close,
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                let word: String = bytes[start..i].iter().collect();
                let tok = match word.as_str() {
                    "0" => Tok::Zero,
                    "1" => Tok::One,
                    w if w.starts_with(|c: char| c.is_ascii_digit()) => {
                        return Err(ParseError::UnexpectedChar { ch: c, pos: start })
                    }
                    _ => Tok::Ident(word),
                };
                out.push((tok, start));
                continue;
            }
            ch => return Err(ParseError::UnexpectedChar { ch, pos: i }),
        };
        out.push((tok, i));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a, F> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    end: usize,
    resolve: F,
}

impl<F: FnMut(&str, usize) -> Result<Symbol, ParseError>> Parser<'_, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn sum(&mut self) -> Result<Term, ParseError> {
        let mut terms = vec![self.product()?];
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            terms.push(self.product()?);
        }
        Ok(Term::sum(terms))
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Zero | Tok::One | Tok::Ident(_) | Tok::Open)
        )
    }

    fn product(&mut self) -> Result<Term, ParseError> {
        let mut factors = vec![self.postfix()?];
        loop {
            if self.peek() == Some(&Tok::Dot) {
                self.pos += 1;
                factors.push(self.postfix()?);
            } else if self.starts_atom() {
                factors.push(self.postfix()?);
            } else {
                break;
            }
        }
        Ok(Term::product(factors))
    }

    fn postfix(&mut self) -> Result<Term, ParseError> {
        let mut t = self.atom()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            t = t.star();
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let offset = self.offset();
        let Some((tok, _)) = self.toks.get(self.pos).cloned() else {
            return Err(ParseError::UnexpectedEnd);
        };
        self.pos += 1;
        match tok {
            Tok::Zero => Ok(Term::zero()),
            Tok::One => Ok(Term::one()),
            Tok::Ident(name) => Ok(Term::sym((self.resolve)(&name, offset)?)),
            Tok::Open => {
                let t = self.sum()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(ParseError::UnclosedParen(self.offset()));
                }
                self.pos += 1;
                Ok(t)
            }
            Tok::Plus | Tok::Dot | Tok::Star | Tok::Close => {
                let ch = match tok {
                    Tok::Plus => '+',
                    Tok::Dot => '.',
                    Tok::Star => '*',
                    _ => ')',
                };
                Err(ParseError::UnexpectedChar { ch, pos: offset })
            }
        }
    }
}

fn run<F>(text: &str, resolve: F) -> Result<Term, ParseError>
where
    F: FnMut(&str, usize) -> Result<Symbol, ParseError>,
{
    let toks = lex(text)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end: text.len(),
        resolve,
    };
    let t = p.sum()?;
    if let Some((tok, pos)) = toks.get(p.pos) {
        let ch = match tok {
            Tok::Close => ')',
            Tok::Star => '*',
            Tok::Plus => '+',
            _ => '?',
        };
        return Err(ParseError::UnexpectedChar { ch, pos: *pos });
    }
    Ok(t)
}

/// Parses a term over the given alphabet.
pub fn parse_term(text: &str, x: &CommutableSet) -> Result<Term, ParseError> {
    run(text, |name, pos| {
        x.lookup(name).ok_or_else(|| ParseError::UnknownSymbol {
            name: name.to_string(),
            pos,
        })
    })
}

/// Identifiers of a well-formed term text, in order of first occurrence.
pub fn identifiers(text: &str) -> Result<Vec<String>, ParseError> {
    let mut names: Vec<String> = Vec::new();
    run(text, |name, _| {
        if !names.iter().any(|n| n == name) {
            names.push(name.to_string());
        }
        Ok(Symbol::new(0))
    })?;
    Ok(names)
}
