//! Exact integer/rational recursions feeding the constants.

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use super::PrecisionError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecursionKind {
    /// F_0 = F_1 = 1, F_{n+1} = F_n + F_{n-1}.
    Fibonacci,
    /// tau_{-2} = 1, tau_{-1} = tau_0 = 2, tau_{n+1} = tau_n tau_{n-1} - tau_{n-2}.
    Tau,
    /// G_0 = 1, G_1 = 2, G_{n+1} = 2 G_n + G_{n-1}.
    G,
    /// t_{-2} = 1, t_{-1} = t_0 = 2,
    /// t_{n+1} = t_n^2 t_{n-1} - t_n^2/t_{n-1} - t_n t_{n-2}/t_{n-1} - t_{n-1}.
    T,
}

impl RecursionKind {
    pub fn base(self) -> i64 {
        match self {
            RecursionKind::Fibonacci | RecursionKind::G => 0,
            RecursionKind::Tau | RecursionKind::T => -2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RecursionKind::Fibonacci => "F",
            RecursionKind::Tau => "tau",
            RecursionKind::G => "G",
            RecursionKind::T => "t",
        }
    }

    fn seeds(self) -> Vec<Rational> {
        let r = |v: i64| Rational::from(v);
        match self {
            RecursionKind::Fibonacci => vec![r(1), r(1)],
            RecursionKind::G => vec![r(1), r(2)],
            RecursionKind::Tau | RecursionKind::T => vec![r(1), r(2), r(2)],
        }
    }
}

/// Lazily extended cache of one recursion, indexed from its base index.
#[derive(Clone, Debug)]
pub struct RecursionState {
    kind: RecursionKind,
    terms: Vec<Rational>,
}

impl RecursionState {
    pub fn new(kind: RecursionKind) -> Self {
        RecursionState { kind, terms: kind.seeds() }
    }

    pub fn kind(&self) -> RecursionKind {
        self.kind
    }

    fn extend_once(&mut self) {
        let t = &self.terms;
        let k = t.len();
        let next = match self.kind {
            RecursionKind::Fibonacci => Rational::from(&t[k - 1] + &t[k - 2]),
            RecursionKind::G => Rational::from(&t[k - 1] * 2u32) + &t[k - 2],
            RecursionKind::Tau => {
                Rational::from(&t[k - 1] * &t[k - 2]) - &t[k - 3]
            }
            RecursionKind::T => {
                let (tn, tm1, tm2) = (&t[k - 1], &t[k - 2], &t[k - 3]);
                let sq = Rational::from(tn * tn);
                let a = Rational::from(&sq * tm1);
                let b = Rational::from(&sq / tm1);
                let c = Rational::from(tn * tm2) / tm1;
                a - b - c - tm1
            }
        };
        self.terms.push(next);
    }

    pub fn term(&mut self, n: i64) -> Result<&Rational, PrecisionError> {
        let base = self.kind.base();
        if n < base {
            return Err(PrecisionError::BelowBase { kind: self.kind.name(), n, base });
        }
        let idx = (n - base) as usize;
        while self.terms.len() <= idx {
            self.extend_once();
        }
        Ok(&self.terms[idx])
    }

    /// Integer-valued kinds only (F, tau, G).
    pub fn integer(&mut self, n: i64) -> Result<Integer, PrecisionError> {
        let q = self.term(n)?;
        debug_assert!(*q.denom() == 1);
        Ok(q.numer().clone())
    }
}

pub fn recursion_term(kind: RecursionKind, n: i64) -> Result<Rational, PrecisionError> {
    RecursionState::new(kind).term(n).cloned()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn base_cases() {
        for (kind, vals) in [
            (RecursionKind::Fibonacci, vec![1, 1]),
            (RecursionKind::G, vec![1, 2]),
            (RecursionKind::Tau, vec![1, 2, 2]),
            (RecursionKind::T, vec![1, 2, 2]),
        ] {
            for (i, v) in vals.into_iter().enumerate() {
                let n = kind.base() + i as i64;
                assert_eq!(recursion_term(kind, n).unwrap(), v, "{kind:?} {n}");
            }
        }
    }

    #[test]
    fn hand_values() {
        assert_eq!(recursion_term(RecursionKind::Fibonacci, 5).unwrap(), 8);
        let mut tau = RecursionState::new(RecursionKind::Tau);
        let got: Vec<_> = (1..=5).map(|n| tau.integer(n).unwrap()).collect();
        assert_eq!(got, [3, 4, 10, 37, 366]);
        let mut g = RecursionState::new(RecursionKind::G);
        assert_eq!(g.integer(2).unwrap(), 5);
        assert_eq!(g.integer(3).unwrap(), 12);
        let mut t = RecursionState::new(RecursionKind::T);
        assert_eq!(*t.term(1).unwrap(), 3);
        assert_eq!(*t.term(2).unwrap(), q(17, 2));
        assert_eq!(*t.term(3).unwrap(), 184);
    }

    #[test]
    fn below_base_is_error() {
        assert!(recursion_term(RecursionKind::Fibonacci, -1).is_err());
        assert!(recursion_term(RecursionKind::T, -3).is_err());
        assert!(recursion_term(RecursionKind::Tau, -2).is_ok());
    }

    #[test]
    fn monotone_from_one() {
        for kind in [RecursionKind::Fibonacci, RecursionKind::Tau, RecursionKind::G, RecursionKind::T] {
            let mut s = RecursionState::new(kind);
            for n in 1..12 {
                let a = s.term(n).unwrap().clone();
                let b = s.term(n + 1).unwrap().clone();
                assert!(b > a, "{kind:?} at {n}");
            }
        }
    }
}
