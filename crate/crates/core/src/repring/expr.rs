//! Representation expressions: integer linear combinations of irreducible
//! labels, e.g. `-(1 + sigma_C - lambda_C)` or `3*rho + 2rhobar`.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := INT ['*'] atom | INT | atom
//! atom   := LABEL | '(' expr ')'
//! ```
//! A bare integer stands for that multiple of the trivial representation.

use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use super::VirtualChar;
use crate::chartab::CharacterTable;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("unknown label {label:?} at offset {offset}")]
    UnknownLabel { label: String, offset: usize },
    #[error("non-integer scalar at offset {offset}")]
    NonInteger { offset: usize },
}

pub fn parse_rep_expr(source: &str, table: &Arc<CharacterTable>) -> Result<VirtualChar, ExprError> {
    let mut p = Parser {
        src: source.as_bytes(),
        pos: 0,
        table,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected {:?}", p.src[p.pos] as char)));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    table: &'a Arc<CharacterTable>,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> ExprError {
        ExprError::Parse {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<VirtualChar, ExprError> {
        let mut neg = false;
        match self.peek() {
            Some(b'-') => {
                neg = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if neg { first.neg() } else { first };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.plus(&t).expect("same table");
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.minus(&t).expect("same table");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<VirtualChar, ExprError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if matches!(self.src.get(self.pos), Some(b'.') | Some(b'/')) {
                    return Err(ExprError::NonInteger { offset: start });
                }
                let k: BigInt = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .parse()
                    .unwrap();
                let explicit = if self.peek() == Some(b'*') {
                    self.pos += 1;
                    true
                } else {
                    false
                };
                match self.peek() {
                    Some(c) if c == b'(' || c.is_ascii_alphabetic() || c == b'_' => {
                        Ok(self.atom()?.scaled(&k))
                    }
                    _ if explicit => Err(self.error("expected a label or '(' after '*'")),
                    _ => Ok(VirtualChar::trivial(self.table).scaled(&k)),
                }
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<VirtualChar, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let label = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let i = self.table.resolve(label).ok_or_else(|| ExprError::UnknownLabel {
                    label: label.to_string(),
                    offset: start,
                })?;
                Ok(VirtualChar::irreducible(self.table, i))
            }
            Some(c) => Err(self.error(format!("unexpected {:?}", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
