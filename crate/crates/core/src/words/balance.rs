use std::collections::HashSet;

use rug::Rational;
use serde::Serialize;

use super::{Word, WordsError};

/// Result of a balance check; on failure, `witness` holds a window length
/// and two windows whose counts of 1 differ by at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Balance {
    pub balanced: bool,
    pub witness: Option<(usize, Word, Word)>,
}

fn require_binary(w: &Word) -> Result<(), WordsError> {
    if w.alphabet_size() != 2 {
        return Err(WordsError::NotBinary(w.alphabet_size()));
    }
    Ok(())
}

/// Checks `| |u|_1 - |v|_1 | <= 1` over all equal-length windows, reporting
/// the first length that fails together with a min- and a max-weight window.
pub fn is_balanced(w: &Word) -> Result<Balance, WordsError> {
    require_binary(w)?;
    let s = w.symbols();
    let mut prefix = Vec::with_capacity(s.len() + 1);
    prefix.push(0u32);
    for &x in s {
        prefix.push(prefix.last().unwrap() + x);
    }
    for n in 1..=s.len() {
        let (mut lo, mut hi) = (u32::MAX, 0u32);
        let (mut lo_at, mut hi_at) = (0, 0);
        for start in 0..=s.len() - n {
            let c = prefix[start + n] - prefix[start];
            if c < lo {
                lo = c;
                lo_at = start;
            }
            if c > hi {
                hi = c;
                hi_at = start;
            }
        }
        if hi - lo > 1 {
            let u = w.slice(lo_at, lo_at + n);
            let v = w.slice(hi_at, hi_at + n);
            return Ok(Balance { balanced: false, witness: Some((n, u, v)) });
        }
    }
    Ok(Balance { balanced: true, witness: None })
}

/// `|w|_1 / |w|` exactly.
pub fn one_frequency(w: &Word) -> Result<Rational, WordsError> {
    require_binary(w)?;
    if w.is_empty() {
        return Err(WordsError::EmptyWord);
    }
    Ok(Rational::from((w.count(1) as u64, w.len() as u64)))
}

/// Finite recurrence check: every length-`n` factor starting in the first
/// half of `w` occurs again later in `w`. Shorter factors then recur too.
/// This cannot certify recurrence of the infinite word.
pub fn recurs_within(w: &Word, n: usize) -> Result<bool, WordsError> {
    if n == 0 {
        return Err(WordsError::ZeroWindow);
    }
    if 2 * n > w.len() {
        return Err(WordsError::WindowExceedsWord { n: 2 * n, len: w.len() });
    }
    let s = w.symbols();
    let half = w.len() / 2;
    let mut later: HashSet<&[u32]> = HashSet::new();
    let mut ok = true;
    // Walk starts right to left so `later` holds factors starting after `i`.
    for i in (0..=s.len() - n).rev() {
        let f = &s[i..i + n];
        if i < half && !later.contains(f) {
            ok = false;
        }
        later.insert(f);
    }
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{SequenceSource, SturmianSpec};

    fn w(s: &str) -> Word {
        Word::from_digits(s, 2).unwrap()
    }

    #[test]
    fn hand_examples() {
        let b = is_balanced(&w("0011")).unwrap();
        assert!(!b.balanced);
        assert_eq!(b.witness, Some((2, w("00"), w("11"))));
        assert!(is_balanced(&w("0101")).unwrap().balanced);
        assert!(is_balanced(&Word::from_digits("012", 3).unwrap()).is_err());
    }

    #[test]
    fn sturmian_prefix_is_balanced() {
        let s = SequenceSource::Sturmian(SturmianSpec::with_gamma("(3-sqrt5)/2".parse().unwrap()).unwrap());
        assert!(is_balanced(&s.generate_prefix(500).unwrap()).unwrap().balanced);
    }

    #[test]
    fn frequencies() {
        assert_eq!(one_frequency(&w("0101")).unwrap(), Rational::from((1, 2)));
        assert_eq!(one_frequency(&w("000")).unwrap(), 0);
        assert_eq!(one_frequency(&w("")), Err(WordsError::EmptyWord));
        let s = SequenceSource::Sturmian(SturmianSpec::with_gamma("(3-sqrt5)/2".parse().unwrap()).unwrap());
        let f = one_frequency(&s.generate_prefix(10_000).unwrap()).unwrap().to_f64();
        assert!((f - 0.381966).abs() < 1e-3);
    }

    #[test]
    fn recurrence_diagnostic() {
        let p = SequenceSource::periodic_digits("011").unwrap().generate_prefix(60).unwrap();
        assert!(recurs_within(&p, 5).unwrap());
        let once = w("1000000000");
        assert!(!recurs_within(&once, 1).unwrap());
    }
}
