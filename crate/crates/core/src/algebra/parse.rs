//! Parser for coefficient expressions: integers, declared parameter names,
//! `+ - * / ^` and parentheses. `^` takes a literal non-negative integer
//! exponent. No implicit multiplication. Every error carries the byte
//! offset it was detected at.

use std::sync::Arc;

use num::bigint::BigInt;

use crate::algebra::ppoly::ParamPoly;
use crate::algebra::rational::Rational;
use crate::algebra::rfunc::RationalFunction;
use crate::algebra::symbols::SymbolTable;
use crate::error::{Error, Result};

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
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            b'/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            b'^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            b'(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..i];
                toks.push((Tok::Int(digits.parse().expect("digits parse")), start));
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(text[start..i].to_string()), start));
            }
            _ => {
                // report the full character, not the raw byte
                let ch = text[i..].chars().next().unwrap();
                return Err(Error::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{ch}`"),
                });
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    end: usize,
    table: &'a Arc<SymbolTable>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&(Tok, usize)> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<&(Tok, usize)> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.peek().map(|(_, p)| *p).unwrap_or(self.end)
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        while let Some((tok, _)) = self.peek() {
            match tok {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = &acc + &rhs;
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = &acc - &rhs;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    // term := factor (('*'|'/') factor)*
    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.factor()?;
        loop {
            let (op, op_pos) = match self.peek() {
                Some((Tok::Star, p)) => (Tok::Star, *p),
                Some((Tok::Slash, p)) => (Tok::Slash, *p),
                _ => break,
            };
            self.bump();
            let rhs = self.factor()?;
            acc = match op {
                Tok::Star => &acc * &rhs,
                _ => {
                    if rhs.is_zero() {
                        return Err(Error::DivisionByZero { pos: Some(op_pos) });
                    }
                    acc.div(&rhs)?
                }
            };
        }
        Ok(acc)
    }

    // factor := '-' factor | power
    fn factor(&mut self) -> Result<RationalFunction> {
        if let Some((Tok::Minus, _)) = self.peek() {
            self.bump();
            let inner = self.factor()?;
            return Ok(-&inner);
        }
        self.power()
    }

    // power := primary ('^' uint)?
    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.primary()?;
        if let Some((Tok::Caret, _)) = self.peek() {
            self.bump();
            let exp_pos = self.here();
            match self.bump().cloned() {
                Some((Tok::Int(n), _)) => {
                    use num::traits::ToPrimitive;
                    let exp = n.to_u32().ok_or(Error::Syntax {
                        pos: exp_pos,
                        msg: "exponent too large".into(),
                    })?;
                    return Ok(base.pow(exp));
                }
                _ => {
                    return Err(Error::Syntax {
                        pos: exp_pos,
                        msg: "exponent must be a non-negative integer literal".into(),
                    })
                }
            }
        }
        Ok(base)
    }

    // primary := Int | Ident | '(' expr ')'
    fn primary(&mut self) -> Result<RationalFunction> {
        let pos = self.here();
        match self.bump().cloned() {
            Some((Tok::Int(n), _)) => Ok(RationalFunction::from_rational(
                self.table,
                Rational::from(n),
            )),
            Some((Tok::Ident(name), p)) => match self.table.index_of(&name) {
                Some(i) => Ok(RationalFunction::from_poly(ParamPoly::symbol(
                    self.table, i,
                ))),
                None => Err(Error::UnknownSymbol { name, pos: p }),
            },
            Some((Tok::LParen, _)) => {
                let inner = self.expr()?;
                match self.bump().cloned() {
                    Some((Tok::RParen, _)) => Ok(inner),
                    Some((_, p)) => Err(Error::Syntax {
                        pos: p,
                        msg: "expected `)`".into(),
                    }),
                    None => Err(Error::Syntax {
                        pos: self.end,
                        msg: "expected `)`".into(),
                    }),
                }
            }
            Some((tok, p)) => Err(Error::Syntax {
                pos: p,
                msg: format!("unexpected token `{tok:?}`"),
            }),
            None => Err(Error::Syntax {
                pos,
                msg: "unexpected end of expression".into(),
            }),
        }
    }
}

/// Parses one coefficient expression over the declared parameters.
pub fn parse_coeff(text: &str, table: &Arc<SymbolTable>) -> Result<RationalFunction> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks: &toks,
        pos: 0,
        end: text.len(),
        table,
    };
    let value = parser.expr()?;
    if let Some((tok, p)) = parser.peek() {
        return Err(Error::Syntax {
            pos: *p,
            msg: format!("unexpected trailing token `{tok:?}`"),
        });
    }
    Ok(value)
}

/// Collects the identifiers appearing in the given expressions, in first-use
/// order, without duplicates. Lexical errors are deferred to `parse_coeff`.
pub fn scan_symbols(texts: &[&str]) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    for text in texts {
        if let Ok(toks) = lex(text) {
            for (tok, _) in toks {
                if let Tok::Ident(name) = tok {
                    if !names.contains(&name) {
                        names.push(name);
                    }
                }
            }
        }
    }
    names
}
