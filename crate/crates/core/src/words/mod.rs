//! Symbolic sequences: rotation codings, product words, subword complexity,
//! balance and letter frequency.

mod balance;
mod complexity;
mod quadratic;
mod source;
mod spec;

pub use balance::{is_balanced, one_frequency, recurs_within, Balance};
pub use complexity::{
    complexity_profile, factor_counts, subword_complexity, ComplexityEntry, ComplexityProfile,
    WindowPolicy,
};
pub use quadratic::{floor_form, QuadraticIrrational};
pub use source::{Padding, SequenceSource, SturmianSpec, Variant};
pub use spec::parse_source;

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WordsError {
    #[error("quadratic irrational: {0}")]
    Quadratic(String),
    #[error("symbol {symbol} outside alphabet of size {size}")]
    SymbolOutOfRange { symbol: u32, size: u32 },
    #[error("alphabet size must be at least 1")]
    EmptyAlphabet,
    #[error("window exceeds word: n = {n}, length {len}")]
    WindowExceedsWord { n: usize, len: usize },
    #[error("window length must be at least 1")]
    ZeroWindow,
    #[error("word is empty")]
    EmptyWord,
    #[error("expected a binary word, alphabet size is {0}")]
    NotBinary(u32),
    #[error("sequence indices start at 1")]
    IndexZero,
    #[error("block {block} has {ones} ones, expected exactly one")]
    Decode { block: u64, ones: usize },
    #[error("rotation number must be irrational")]
    RationalGamma,
    #[error("rotation number must lie in (0, 1), got {0}")]
    GammaOutOfRange(String),
    #[error("bad sequence spec: {0}")]
    Spec(String),
}

/// A letter of `Sigma_m`, checked against its alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(u32);

impl Symbol {
    pub fn new(value: u32, alphabet_size: u32) -> Result<Self, WordsError> {
        if value >= alphabet_size {
            return Err(WordsError::SymbolOutOfRange { symbol: value, size: alphabet_size });
        }
        Ok(Symbol(value))
    }

    pub fn value(self) -> u32 {
        self.0
    }
}

/// Finite word over `Sigma_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    symbols: Vec<u32>,
    alphabet_size: u32,
}

impl Word {
    pub fn new(symbols: Vec<u32>, alphabet_size: u32) -> Result<Self, WordsError> {
        if alphabet_size == 0 {
            return Err(WordsError::EmptyAlphabet);
        }
        if let Some(&s) = symbols.iter().find(|&&s| s >= alphabet_size) {
            return Err(WordsError::SymbolOutOfRange { symbol: s, size: alphabet_size });
        }
        Ok(Word { symbols, alphabet_size })
    }

    pub fn from_digits(s: &str, alphabet_size: u32) -> Result<Self, WordsError> {
        let symbols = s
            .chars()
            .map(|c| c.to_digit(10).ok_or_else(|| WordsError::Spec(format!("not a digit: {c:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Word::new(symbols, alphabet_size)
    }

    /// Digit string, or comma/dot-separated integers for larger alphabets.
    pub fn parse(s: &str, alphabet_size: u32) -> Result<Self, WordsError> {
        let s = s.trim();
        if s.contains(',') || s.contains('.') {
            let symbols = s
                .split([',', '.'])
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.trim().parse::<u32>().map_err(|e| WordsError::Spec(format!("{t:?}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            return Word::new(symbols, alphabet_size);
        }
        Word::from_digits(s, alphabet_size)
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u32> {
        self.symbols
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, i: usize) -> Symbol {
        Symbol(self.symbols[i])
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word { symbols: self.symbols[start..end].to_vec(), alphabet_size: self.alphabet_size }
    }

    pub fn count(&self, s: u32) -> usize {
        self.symbols.iter().filter(|&&x| x == s).count()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alphabet_size <= 10 {
            for s in &self.symbols {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.symbols.iter().map(u32::to_string).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serialization_switches_at_ten_letters() {
        assert_eq!(Word::from_digits("0110", 2).unwrap().to_string(), "0110");
        let w = Word::new(vec![3, 11, 0], 16).unwrap();
        assert_eq!(w.to_string(), "3,11,0");
        assert_eq!(Word::parse("3,11,0", 16).unwrap(), w);
    }

    #[test]
    fn symbols_checked_against_alphabet() {
        assert!(Word::from_digits("012", 2).is_err());
        assert!(Symbol::new(2, 2).is_err());
        assert_eq!(Symbol::new(1, 2).unwrap().value(), 1);
        assert!(Word::new(vec![], 0).is_err());
    }
}
