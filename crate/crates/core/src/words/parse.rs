//! Recursive-descent parser for twist words.
//!
//! ```text
//! word := term+
//! term := atom ('^' int)?
//! atom := 'a' | 'b' | 'c' | 'd' | 'e' | 'I' | '(' word ')'
//! ```

use super::{Letter, Symbol, TwistWord};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at column {column}: {message}")]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    _src: &'a str,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { column: self.pos + 1, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn word(&mut self, nested: bool) -> Result<Vec<Letter>, ParseError> {
        let mut letters = Vec::new();
        let mut terms = 0;
        loop {
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(')') if nested => break,
                Some(_) => {
                    letters.extend(self.term()?);
                    terms += 1;
                }
            }
        }
        if terms == 0 && nested {
            return self.err("empty group");
        }
        Ok(letters)
    }

    fn term(&mut self) -> Result<Vec<Letter>, ParseError> {
        let atom: Vec<Letter> = match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.word(true)?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                inner
            }
            Some(c) => match Symbol::from_char(c) {
                Some(symbol) => {
                    self.pos += 1;
                    vec![Letter { symbol, exp: 1 }]
                }
                None => return self.err(format!("unexpected character {c:?}")),
            },
            None => return self.err("unexpected end of input"),
        };
        let save = self.pos;
        self.skip_ws();
        if self.peek() != Some('^') {
            self.pos = save;
            return Ok(atom);
        }
        self.pos += 1;
        self.skip_ws();
        let n = self.int()?;
        Ok(power(&atom, n))
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let start = self.pos;
        if matches!(self.peek(), Some('+') | Some('-')) {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return self.err("expected an integer exponent");
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().or_else(|_| {
            self.pos = start;
            self.err("exponent out of range")
        })
    }
}

fn power(atom: &[Letter], n: i64) -> Vec<Letter> {
    if atom.len() == 1 {
        return vec![Letter { symbol: atom[0].symbol, exp: atom[0].exp * n }];
    }
    let base: Vec<Letter> = if n < 0 {
        atom.iter().rev().map(|l| Letter { symbol: l.symbol, exp: -l.exp }).collect()
    } else {
        atom.to_vec()
    };
    let mut out = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
    for _ in 0..n.unsigned_abs() {
        out.extend_from_slice(&base);
    }
    out
}

pub(super) fn parse_word(text: &str) -> Result<TwistWord, ParseError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, _src: text };
    let letters = p.word(false)?;
    if p.pos != p.chars.len() {
        return p.err("unbalanced ')'");
    }
    Ok(TwistWord::new(letters))
}
