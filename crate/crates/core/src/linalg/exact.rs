//! Polynomials with rational coefficients in named constants.
//!
//! Family members are written over these so that products keep the integer
//! pattern and the powers of named constants separately and exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rug::{Integer, Rational};

use super::matrix::{Entry, Matrix};
use super::LinalgError;
use crate::precision::BigReal;

/// Numeric values for the named constants appearing in entries.
pub type Valuation = BTreeMap<String, BigReal>;

/// Product of named constants with positive exponents, sorted by name.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Arc<str>, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial(vec![(Arc::from(name), 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&str, u32)> {
        self.0.iter().map(|(n, e)| (n.as_ref(), *e))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out: Vec<(Arc<str>, u32)> = Vec::with_capacity(self.0.len() + o.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < o.0.len() {
            if j == o.0.len() || (i < self.0.len() && self.0[i].0 < o.0[j].0) {
                out.push(self.0[i].clone());
                i += 1;
            } else if i == self.0.len() || o.0[j].0 < self.0[i].0 {
                out.push(o.0[j].clone());
                j += 1;
            } else {
                out.push((self.0[i].0.clone(), self.0[i].1 + o.0[j].1));
                i += 1;
                j += 1;
            }
        }
        Monomial(out)
    }

    pub fn evaluate(&self, vals: &Valuation, prec: u32) -> Result<BigReal, LinalgError> {
        let mut acc = BigReal::from_i64(1, prec);
        for (name, e) in &self.0 {
            let v = vals
                .get(name.as_ref())
                .ok_or_else(|| LinalgError::MissingSymbol(name.to_string()))?
                .round_to(prec);
            for _ in 0..*e {
                acc = acc.mul(&v);
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (name, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Exact {
    terms: BTreeMap<Monomial, Rational>,
}

impl Exact {
    pub fn int(v: i64) -> Self {
        Self::rational(Rational::from(v))
    }

    pub fn rational(q: Rational) -> Self {
        Self::term(q, Monomial::one())
    }

    pub fn var(name: &str) -> Self {
        Self::term(Rational::from(1), Monomial::var(name))
    }

    pub fn term(q: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if q != 0 {
            terms.insert(m, q);
        }
        Exact { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// The single `(coefficient, monomial)` pair, if there is exactly one term.
    pub fn single(&self) -> Option<(&Rational, &Monomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, q)| (q, m))
        } else {
            None
        }
    }

    /// The value as a rational, if no named constant occurs.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::new()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<Integer> {
        self.as_rational().filter(|q| *q.denom() == 1).map(|q| q.numer().clone())
    }

    pub fn neg(&self) -> Self {
        Exact { terms: self.terms.iter().map(|(m, q)| (m.clone(), Rational::from(-q))).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Entry::add(self, &o.neg())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Exact::one();
        for _ in 0..k {
            acc = Entry::mul(&acc, self);
        }
        acc
    }

    pub fn evaluate(&self, vals: &Valuation, prec: u32) -> Result<BigReal, LinalgError> {
        let mut acc = BigReal::zero();
        for (m, q) in &self.terms {
            let c = BigReal::from_rational(q, prec);
            let t = if m.is_one() { c } else { c.mul(&m.evaluate(vals, prec)?) };
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    pub fn symbols(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .terms
            .keys()
            .flat_map(|m| m.factors().map(|(n, _)| n.to_string()))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

impl Entry for Exact {
    fn zero() -> Self {
        Exact::default()
    }
    fn one() -> Self {
        Exact::int(1)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, q) in &o.terms {
            let e = terms.entry(m.clone()).or_default();
            *e += q;
            if *e == 0 {
                terms.remove(m);
            }
        }
        Exact { terms }
    }
    fn mul(&self, o: &Self) -> Self {
        let mut out = Exact::default();
        for (ma, qa) in &self.terms {
            for (mb, qb) in &o.terms {
                out = Entry::add(&out, &Exact::term(Rational::from(qa * qb), ma.mul(mb)));
            }
        }
        out
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, q: &Rational) -> fmt::Result {
    if *q.denom() == 1 {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, q)) in self.terms.iter().enumerate() {
            let mag = Rational::from(q.abs_ref());
            if k == 0 {
                if *q < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if *q < 0 { " - " } else { " + " })?;
            }
            if m.is_one() {
                write_rational(f, &mag)?;
            } else if mag == 1 {
                write!(f, "{m}")?;
            } else {
                write_rational(f, &mag)?;
                write!(f, "*{m}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, LinalgError> {
    let err = |msg: String| LinalgError::Parse(format!("{msg} in {s:?}"));
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            let lit: String = cs[start..i].iter().collect();
            out.push(Tok::Num(parse_decimal_rational(&lit).ok_or_else(|| err(format!("bad number {lit}")))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(err(format!("unexpected {c:?}")));
        }
    }
    Ok(out)
}

/// Exact rational from a decimal literal like `12`, `0.25` or `.5`.
pub fn parse_decimal_rational(lit: &str) -> Option<Rational> {
    let (int, frac) = match lit.split_once('.') {
        Some((a, b)) => (a, b),
        None => (lit, ""),
    };
    if int.is_empty() && frac.is_empty() || frac.contains('.') {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n: Integer = digits.parse().ok()?;
    let d = Integer::from(Integer::u_pow_u(10, frac.len() as u32));
    Some(Rational::from((n, d)))
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Exact, LinalgError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = Entry::add(&acc, &self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Exact, LinalgError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = Entry::mul(&acc, &self.factor()?);
            } else if self.eat('/') {
                let d = self.factor()?;
                let q = d
                    .as_rational()
                    .filter(|q| *q != 0)
                    .ok_or_else(|| LinalgError::Parse("division by a non-constant or zero".into()))?;
                acc = Entry::mul(&acc, &Exact::rational(q.recip()));
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Exact, LinalgError> {
        if self.eat('-') {
            return Ok(self.factor()?.neg());
        }
        let base = match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(q)) => {
                self.pos += 1;
                Exact::rational(q)
            }
            Some(Tok::Ident(n)) => {
                self.pos += 1;
                Exact::var(&n)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(LinalgError::Parse("missing ')'".into()));
                }
                e
            }
            other => return Err(LinalgError::Parse(format!("unexpected token {other:?}"))),
        };
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(q)) if *q.denom() == 1 && q >= 0 => {
                    self.pos += 1;
                    let k = q.numer().to_u32().ok_or_else(|| LinalgError::Parse("exponent too large".into()))?;
                    return Ok(base.pow(k));
                }
                _ => return Err(LinalgError::Parse("exponent must be a nonnegative integer".into())),
            }
        }
        Ok(base)
    }
}

impl std::str::FromStr for Exact {
    type Err = LinalgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { toks: tokenize(s)?, pos: 0 };
        if p.toks.is_empty() {
            return Err(LinalgError::Parse("empty entry".into()));
        }
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(LinalgError::Parse(format!("trailing input in {s:?}")));
        }
        Ok(e)
    }
}

/// `scalar * pattern` with an integer pattern.
#[derive(Clone, Debug, PartialEq)]
pub struct Factored {
    pub scalar: Exact,
    pub pattern: Matrix<Integer>,
}

impl Factored {
    pub fn expand(&self) -> Matrix<Exact> {
        self.pattern.map(|v| {
            if *v == 0 {
                Exact::default()
            } else {
                Entry::mul(&self.scalar, &Exact::rational(Rational::from(v)))
            }
        })
    }
}

/// Splits `m` into a scalar and an integer pattern when every nonzero entry
/// is a rational multiple of one common monomial. The pattern is made
/// primitive (content 1) with a positive leading nonzero entry.
pub fn factor(m: &Matrix<Exact>) -> Option<Factored> {
    let mut mono: Option<&Monomial> = None;
    for e in m.data() {
        if e.is_zero() {
            continue;
        }
        let (_, mm) = e.single()?;
        match mono {
            None => mono = Some(mm),
            Some(prev) if prev != mm => return None,
            _ => {}
        }
    }
    let Some(mono) = mono else {
        return Some(Factored { scalar: Exact::one(), pattern: Matrix::zeros(m.rows(), m.cols()) });
    };
    let coeff = |e: &Exact| e.single().map(|(q, _)| q.clone()).unwrap_or_default();
    let mut lcm = Integer::from(1);
    let mut gcd = Integer::new();
    for e in m.data() {
        let q = coeff(e);
        lcm.lcm_mut(q.denom());
        gcd.gcd_mut(q.numer());
    }
    let mut unit = Rational::from((gcd, lcm));
    if let Some(first) = m.data().iter().find(|e| !e.is_zero()) {
        if coeff(first) < 0 {
            unit = -unit;
        }
    }
    let pattern = m.map(|e| {
        let r = Rational::from(&coeff(e) / &unit);
        debug_assert!(*r.denom() == 1);
        r.numer().clone()
    });
    Some(Factored { scalar: Exact::term(unit, mono.clone()), pattern })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(s: &str) -> Exact {
        s.parse().unwrap()
    }

    #[test]
    fn monomials_multiply_and_sort() {
        let a = ex("alpha_star*beta");
        let b = ex("alpha_star");
        assert_eq!(Entry::mul(&a, &b).to_string(), "alpha_star^2*beta");
        assert_eq!(Entry::mul(&b, &a), Entry::mul(&a, &b));
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["0", "3/2", "-1", "alpha_star", "2*a^3*b", "1 + x", "-1/2 + 3*y"] {
            let e = ex(s);
            assert_eq!(ex(&e.to_string()), e, "{s}");
        }
        assert_eq!(ex("0.25").to_string(), "1/4");
        assert_eq!(ex("(1 + x)*(1 - x)").to_string(), "1 - x^2");
        assert!("x/y".parse::<Exact>().is_err());
        assert!("1 +".parse::<Exact>().is_err());
    }

    #[test]
    fn cancellation_removes_terms() {
        let e = ex("x").sub(&ex("x"));
        assert!(e.is_zero());
        assert_eq!(e.to_string(), "0");
    }

    #[test]
    fn evaluate_with_valuation() {
        let mut v = Valuation::new();
        v.insert("a".into(), BigReal::parse_decimal("0.5", 128).unwrap());
        let e = ex("3*a^2 + 1");
        assert_eq!(e.evaluate(&v, 128).unwrap().to_f64(), 1.75);
        assert!(ex("b").evaluate(&v, 128).is_err());
    }

    #[test]
    fn factor_extracts_scalar() {
        let m = Matrix::new(2, 2, vec![ex("2*a"), ex("0"), ex("4*a"), ex("2*a")]).unwrap();
        let f = factor(&m).unwrap();
        assert_eq!(f.scalar, ex("2*a"));
        assert_eq!(f.pattern, Matrix::from_i64(2, 2, &[1, 0, 2, 1]));
        assert_eq!(f.expand(), m);
        let mixed = Matrix::new(1, 2, vec![ex("a"), ex("1")]).unwrap();
        assert!(factor(&mixed).is_none());
    }
}
