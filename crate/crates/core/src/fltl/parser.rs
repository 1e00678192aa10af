//! Recursive-descent parser for the formula text syntax.
//!
//! Precedence, tightest first: unary operators (`!`, `X`, `F`, `G`,
//! `factor{λ}`), `U`, `&`, `|`, `->`. `U` and `->` associate to the right.

use std::collections::BTreeSet;

use super::Formula;
use crate::error::{Error, Result};
use crate::rational::{in_unit_interval, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(String),
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Slash,
}

const KEYWORDS: &[&str] = &["true", "false", "X", "F", "G", "U", "factor", "wavg", "min", "max"];

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '!' => Tok::Not,
            '&' => Tok::And,
            '|' => Tok::Or,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            '/' => Tok::Slash,
            '-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_digit() => {
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                }
                Tok::Num(text[start..=i].to_string())
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            other => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    atoms: &'a BTreeSet<String>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == name)
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.until()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            lhs = Formula::and(lhs, self.until()?);
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Formula> {
        let lhs = self.unary()?;
        if self.is_ident("U") {
            self.pos += 1;
            let rhs = self.until()?;
            return Ok(Formula::until(lhs, rhs));
        }
        Ok(lhs)
    }

    fn parameter(&mut self) -> Result<Rational> {
        self.expect(Tok::LBrace, "'{'")?;
        let start = self.offset();
        let mut text = match self.peek() {
            Some(Tok::Num(n)) => n.clone(),
            _ => return self.err("expected a rational parameter"),
        };
        self.pos += 1;
        if self.peek() == Some(&Tok::Slash) {
            self.pos += 1;
            match self.peek() {
                Some(Tok::Num(d)) => text = format!("{text}/{d}"),
                _ => return self.err("expected a denominator"),
            }
            self.pos += 1;
        }
        self.expect(Tok::RBrace, "'}'")?;
        let value = parse_rational(&text).map_err(|_| Error::Syntax {
            pos: start,
            msg: format!("malformed rational '{text}'"),
        })?;
        if !in_unit_interval(&value) {
            return Err(Error::ParameterRange(value));
        }
        Ok(value)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Ident(s)) => match s.as_str() {
                "X" => {
                    self.pos += 1;
                    Ok(Formula::next(self.unary()?))
                }
                "F" => {
                    self.pos += 1;
                    Ok(Formula::eventually(self.unary()?))
                }
                "G" => {
                    self.pos += 1;
                    Ok(Formula::globally(self.unary()?))
                }
                "factor" => {
                    self.pos += 1;
                    let l = self.parameter()?;
                    Ok(Formula::factor(l, self.unary()?))
                }
                _ => self.primary(),
            },
            _ => self.primary(),
        }
    }

    fn list(&mut self) -> Result<Vec<Formula>> {
        self.expect(Tok::LParen, "'('")?;
        let mut items = vec![self.implication()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            items.push(self.implication()?);
        }
        self.expect(Tok::RParen, "')'")?;
        Ok(items)
    }

    fn primary(&mut self) -> Result<Formula> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return self.err("unexpected end of input"),
        };
        match tok {
            Tok::LParen => {
                self.pos += 1;
                let f = self.implication()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Tok::Ident(name) => match name.as_str() {
                "true" => {
                    self.pos += 1;
                    Ok(Formula::True)
                }
                "false" => {
                    self.pos += 1;
                    Ok(Formula::False)
                }
                "wavg" => {
                    self.pos += 1;
                    let l = self.parameter()?;
                    let mut args = self.list()?;
                    if args.len() != 2 {
                        return self.err("wavg takes exactly two arguments");
                    }
                    let b = args.pop().unwrap();
                    let a = args.pop().unwrap();
                    Ok(Formula::wavg(l, a, b))
                }
                "min" => {
                    self.pos += 1;
                    Ok(Formula::Min(self.list()?))
                }
                "max" => {
                    self.pos += 1;
                    Ok(Formula::Max(self.list()?))
                }
                kw if KEYWORDS.contains(&kw) => self.err(format!("unexpected keyword '{kw}'")),
                _ => {
                    if !self.atoms.contains(&name) {
                        return Err(Error::UnknownAtom(name));
                    }
                    self.pos += 1;
                    Ok(Formula::Atom(name))
                }
            },
            _ => self.err("expected a formula"),
        }
    }
}

/// Parses `text`; atoms must belong to `inputs ∪ outputs`.
pub fn parse<S: AsRef<str>, T: AsRef<str>>(text: &str, inputs: &[S], outputs: &[T]) -> Result<Formula> {
    let atoms: BTreeSet<String> = inputs
        .iter()
        .map(|a| a.as_ref().to_string())
        .chain(outputs.iter().map(|a| a.as_ref().to_string()))
        .collect();
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.len(),
        atoms: &atoms,
    };
    let f = p.implication()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(f)
}
