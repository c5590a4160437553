//! Words in the Dehn twists `a, b, c, d, e` along the genus-2 chain and the
//! hyperelliptic involution `I`.

mod braid;
pub mod named;
mod parse;
mod psi;

pub use braid::{braid_equal, garside_normal_form, BraidVerdict, NormalForm};
pub use parse::ParseError;
pub use psi::{is_torelli, psi, psi_mod, HomologyAssignment};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A generator of the twist alphabet.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Symbol {
    A,
    B,
    C,
    D,
    E,
    /// The hyperelliptic involution, written `I`.
    Iota,
}

impl Symbol {
    pub const TWISTS: [Symbol; 5] = [Symbol::A, Symbol::B, Symbol::C, Symbol::D, Symbol::E];

    pub fn as_char(self) -> char {
        match self {
            Symbol::A => 'a',
            Symbol::B => 'b',
            Symbol::C => 'c',
            Symbol::D => 'd',
            Symbol::E => 'e',
            Symbol::Iota => 'I',
        }
    }

    pub fn from_char(c: char) -> Option<Symbol> {
        Some(match c {
            'a' => Symbol::A,
            'b' => Symbol::B,
            'c' => Symbol::C,
            'd' => Symbol::D,
            'e' => Symbol::E,
            'I' => Symbol::Iota,
            _ => return None,
        })
    }

    /// Position in the chain `a, b, c, d, e` (0-based); `None` for `I`.
    pub fn chain_index(self) -> Option<usize> {
        Symbol::TWISTS.iter().position(|&s| s == self)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter {
    pub symbol: Symbol,
    pub exp: i64,
}

/// A normalized word: adjacent equal symbols merged, zero exponents dropped,
/// and the exponent of `I` reduced mod 2.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct TwistWord {
    letters: Vec<Letter>,
}

impl TwistWord {
    pub fn identity() -> Self {
        TwistWord::default()
    }

    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            push_letter(&mut out, l);
        }
        TwistWord { letters: out }
    }

    pub fn letter(symbol: Symbol, exp: i64) -> Self {
        TwistWord::new([Letter { symbol, exp }])
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse::parse_word(text)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Sum of absolute exponents.
    pub fn length(&self) -> u64 {
        self.letters.iter().map(|l| l.exp.unsigned_abs()).sum()
    }

    pub fn contains_iota(&self) -> bool {
        self.letters.iter().any(|l| l.symbol == Symbol::Iota)
    }

    pub fn mul(&self, other: &TwistWord) -> TwistWord {
        TwistWord::new(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn inverse(&self) -> TwistWord {
        TwistWord::new(self.letters.iter().rev().map(|l| Letter { symbol: l.symbol, exp: -l.exp }))
    }

    pub fn pow(&self, n: i64) -> TwistWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = TwistWord::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate_by(&self, g: &TwistWord) -> TwistWord {
        g.mul(self).mul(&g.inverse())
    }

    /// Expands into single letters with exponent ±1 (ι kept as one letter).
    pub fn expanded(&self) -> Vec<(Symbol, i8)> {
        let mut out = Vec::new();
        for l in &self.letters {
            let s = if l.exp > 0 { 1 } else { -1 };
            for _ in 0..l.exp.unsigned_abs() {
                out.push((l.symbol, s));
            }
        }
        out
    }
}

fn push_letter(out: &mut Vec<Letter>, l: Letter) {
    let mut l = l;
    if l.symbol == Symbol::Iota {
        l.exp = l.exp.rem_euclid(2);
    }
    if l.exp == 0 {
        return;
    }
    if let Some(last) = out.last_mut() {
        if last.symbol == l.symbol {
            last.exp += l.exp;
            if last.symbol == Symbol::Iota {
                last.exp = last.exp.rem_euclid(2);
            }
            if last.exp == 0 {
                out.pop();
            }
            return;
        }
    }
    out.push(l);
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", l.symbol.as_char())?;
            if l.exp != 1 {
                write!(f, "^{}", l.exp)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self)
    }
}

impl FromStr for TwistWord {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TwistWord::parse(s)
    }
}

impl Serialize for TwistWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TwistWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        TwistWord::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Parses a word known to be well formed.
///
/// # Panics
/// On a syntax error; intended for built-in word constants.
pub fn w(text: &str) -> TwistWord {
    TwistWord::parse(text).unwrap_or_else(|e| panic!("built-in word {text:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        assert_eq!(w("a a^-1"), TwistWord::identity());
        assert_eq!(w("a^2 a^3 b^0 c"), w("a^5 c"));
        assert_eq!(w("I I"), TwistWord::identity());
        assert_eq!(w("I^3"), w("I"));
        assert_eq!(w("I^-1").to_string(), "I");
        assert_eq!(w("a b b^-1 a^-1"), TwistWord::identity());
    }

    #[test]
    fn inverse_and_power() {
        let x = w("a b^2 c^-1");
        assert_eq!(x.inverse(), w("c b^-2 a^-1"));
        assert_eq!(x.mul(&x.inverse()), TwistWord::identity());
        assert_eq!(w("a b").pow(3), w("a b a b a b"));
        assert_eq!(w("a b").pow(-2), w("b^-1 a^-1 b^-1 a^-1"));
        assert_eq!(w("c").conjugate_by(&w("a")), w("a c a^-1"));
    }

    #[test]
    fn serde_as_string() {
        let x = w("(a b)^2 I");
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "\"a b a b I\"");
        let y: TwistWord = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
    }
}
