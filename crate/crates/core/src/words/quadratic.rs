//! Exact elements of Q(sqrt d) and their floors.

use std::fmt;
use std::str::FromStr;

use rug::{Integer, Rational};

use super::WordsError;
use crate::linalg::parse_decimal_rational;

/// `p + q sqrt(d)` with rational `p, q` and squarefree `d >= 2`
/// (or `d = 1` and `q = 0` for a rational value).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticIrrational {
    p: Rational,
    q: Rational,
    d: Integer,
}

/// Splits `n > 0` as `s^2 * r` with `r` squarefree.
fn square_part(n: &Integer) -> (Integer, Integer) {
    let mut s = Integer::from(1);
    let mut r = Integer::from(1);
    let mut rest = n.clone();
    let mut f = Integer::from(2);
    while Integer::from(&f * &f) <= rest {
        let mut e = 0u32;
        while rest.is_divisible(&f) {
            rest /= &f;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= &f;
        }
        if e % 2 == 1 {
            r *= &f;
        }
        f += 1;
    }
    r *= rest;
    (s, r)
}

/// `floor(sqrt(n))` for `n >= 0`.
fn isqrt(n: &Integer) -> Integer {
    n.clone().sqrt()
}

impl QuadraticIrrational {
    pub fn rational(p: Rational) -> Self {
        QuadraticIrrational { p, q: Rational::new(), d: Integer::from(1) }
    }

    pub fn from_int(v: i64) -> Self {
        Self::rational(Rational::from(v))
    }

    /// `sqrt(n)` for `n >= 0`, with square factors pulled out.
    pub fn sqrt_of(n: &Integer) -> Result<Self, WordsError> {
        if *n < 0 {
            return Err(WordsError::Quadratic(format!("sqrt of negative {n}")));
        }
        if *n == 0 {
            return Ok(Self::from_int(0));
        }
        let (s, r) = square_part(n);
        if r == 1 {
            return Ok(Self::rational(Rational::from(s)));
        }
        Ok(QuadraticIrrational { p: Rational::new(), q: Rational::from(s), d: r })
    }

    /// `(a + b sqrt(d)) / c` for integer `a, b, c` and `c != 0`.
    pub fn new(a: i64, b: i64, d: i64, c: i64) -> Result<Self, WordsError> {
        if c == 0 {
            return Err(WordsError::Quadratic("zero denominator".into()));
        }
        let root = Self::sqrt_of(&Integer::from(d))?;
        let num = Self::from_int(a).add(&Self::from_int(b).mul(&root)?)?;
        num.div(&Self::from_int(c))
    }

    pub fn is_rational(&self) -> bool {
        self.q == 0
    }

    pub fn radicand(&self) -> &Integer {
        &self.d
    }

    pub fn rational_part(&self) -> &Rational {
        &self.p
    }

    pub fn irrational_coeff(&self) -> &Rational {
        &self.q
    }

    fn normalized(mut self) -> Self {
        if self.q == 0 {
            self.d = Integer::from(1);
        }
        self
    }

    fn common_d(&self, o: &Self) -> Result<Integer, WordsError> {
        match (self.is_rational(), o.is_rational()) {
            (true, true) => Ok(Integer::from(1)),
            (false, true) => Ok(self.d.clone()),
            (true, false) => Ok(o.d.clone()),
            (false, false) if self.d == o.d => Ok(self.d.clone()),
            _ => Err(WordsError::Quadratic(format!(
                "mixed radicands sqrt({}) and sqrt({})",
                self.d, o.d
            ))),
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self, WordsError> {
        let d = self.common_d(o)?;
        Ok(QuadraticIrrational {
            p: Rational::from(&self.p + &o.p),
            q: Rational::from(&self.q + &o.q),
            d,
        }
        .normalized())
    }

    pub fn neg(&self) -> Self {
        QuadraticIrrational { p: Rational::from(-&self.p), q: Rational::from(-&self.q), d: self.d.clone() }
    }

    pub fn sub(&self, o: &Self) -> Result<Self, WordsError> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self, WordsError> {
        let d = self.common_d(o)?;
        let pp = Rational::from(&self.p * &o.p);
        let qq = Rational::from(&self.q * &o.q) * Rational::from(&d);
        let pq = Rational::from(&self.p * &o.q) + Rational::from(&self.q * &o.p);
        Ok(QuadraticIrrational { p: pp + qq, q: pq, d }.normalized())
    }

    pub fn div(&self, o: &Self) -> Result<Self, WordsError> {
        let d = self.common_d(o)?;
        // 1/(p + q sqrt d) = (p - q sqrt d) / (p^2 - q^2 d)
        let norm = Rational::from(&o.p * &o.p) - Rational::from(&o.q * &o.q) * Rational::from(&d);
        if norm == 0 {
            return Err(WordsError::Quadratic("division by zero".into()));
        }
        let inv = QuadraticIrrational {
            p: Rational::from(&o.p / &norm),
            q: Rational::from(-&o.q) / &norm,
            d,
        }
        .normalized();
        self.mul(&inv)
    }

    pub fn mul_int(&self, k: &Integer) -> Self {
        QuadraticIrrational {
            p: Rational::from(&self.p * k),
            q: Rational::from(&self.q * k),
            d: self.d.clone(),
        }
        .normalized()
    }

    /// Integers `(a, b, c)` with `c > 0` and value `(a + b sqrt d) / c`.
    pub fn integer_form(&self) -> (Integer, Integer, Integer) {
        let c = Integer::from(self.p.denom().lcm_ref(self.q.denom()));
        let a = self.p.numer() * Integer::from(&c / self.p.denom());
        let b = self.q.numer() * Integer::from(&c / self.q.denom());
        (a, b, c)
    }

    /// Exact floor.
    pub fn floor(&self) -> Integer {
        let (a, b, c) = self.integer_form();
        floor_form(&a, &b, &self.d, &c)
    }

    pub fn ceil(&self) -> Integer {
        -self.neg().floor()
    }

    /// The representative of `self mod 1` in `[0, 1)`.
    pub fn fract(&self) -> Self {
        let f = Self::rational(Rational::from(self.floor()));
        self.sub(&f).expect("rational shift keeps the radicand")
    }

    pub fn to_f64(&self) -> f64 {
        self.p.to_f64() + self.q.to_f64() * self.d.to_f64().sqrt()
    }

    pub fn is_positive(&self) -> bool {
        let (a, b, c) = self.integer_form();
        sign_form(&a, &b, &self.d) > 0 && c > 0
    }
}

/// Sign of `a + b sqrt d` (with `d` squarefree, or `b = 0`).
fn sign_form(a: &Integer, b: &Integer, d: &Integer) -> i32 {
    let sa = a.cmp0() as i32;
    let sb = b.cmp0() as i32;
    if sb == 0 || sa == sb {
        return if sa != 0 { sa } else { sb };
    }
    if sa == 0 {
        return sb;
    }
    // Opposite signs: compare a^2 with b^2 d.
    let a2 = Integer::from(a * a);
    let b2d = Integer::from(b * b) * d;
    match a2.cmp(&b2d) {
        std::cmp::Ordering::Greater => sa,
        std::cmp::Ordering::Less => sb,
        std::cmp::Ordering::Equal => 0,
    }
}

/// `floor((a + b sqrt d) / c)` for `c > 0`. When `b sqrt d` is irrational,
/// replacing it by its floor does not change the result.
pub fn floor_form(a: &Integer, b: &Integer, d: &Integer, c: &Integer) -> Integer {
    let fb = if *b == 0 {
        Integer::new()
    } else {
        let r = isqrt(&(Integer::from(b * b) * d));
        if *b > 0 { r } else { -r - 1 }
    };
    let num = Integer::from(a + &fb);
    num.div_rem_floor(c.clone()).0
}

impl fmt::Display for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b, c) = self.integer_form();
        let mut num = String::new();
        if a != 0 || b == 0 {
            num.push_str(&a.to_string());
        }
        if b != 0 {
            let mag = Integer::from(b.abs_ref());
            let sign = if b < 0 { "-" } else if a != 0 { "+" } else { "" };
            let coeff = if mag == 1 { String::new() } else { format!("{mag}*") };
            num.push_str(&format!("{sign}{coeff}sqrt({})", self.d));
        }
        if c == 1 {
            write!(f, "{num}")
        } else if b != 0 && a != 0 {
            write!(f, "({num})/{c}")
        } else {
            write!(f, "{num}/{c}")
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Sqrt,
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, WordsError> {
    let err = |m: String| WordsError::Quadratic(format!("{m} in {s:?}"));
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
        } else if cs[i..].starts_with(&['s', 'q', 'r', 't']) {
            out.push(Tok::Sqrt);
            i += 4;
        } else if "+-*/()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(err(format!("unexpected {c:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn eat(&mut self, c: char) -> bool {
        if self.toks.get(self.pos) == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<QuadraticIrrational, WordsError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<QuadraticIrrational, WordsError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?)?;
            } else if self.eat('/') {
                acc = acc.div(&self.unary()?)?;
            } else if matches!(self.toks.get(self.pos), Some(Tok::Sqrt)) {
                // Implicit product, as in `2sqrt5`.
                acc = acc.mul(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<QuadraticIrrational, WordsError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(q)) => {
                self.pos += 1;
                Ok(QuadraticIrrational::rational(q))
            }
            Some(Tok::Sqrt) => {
                self.pos += 1;
                let arg = match self.toks.get(self.pos).cloned() {
                    Some(Tok::Num(q)) => {
                        self.pos += 1;
                        q
                    }
                    Some(Tok::Op('(')) => {
                        self.pos += 1;
                        let e = self.expr()?;
                        if !self.eat(')') || !e.is_rational() {
                            return Err(WordsError::Quadratic("sqrt needs a rational argument".into()));
                        }
                        e.p
                    }
                    _ => return Err(WordsError::Quadratic("sqrt needs an argument".into())),
                };
                if *arg.denom() != 1 {
                    // sqrt(a/b) = sqrt(a b) / b
                    let n = Integer::from(arg.numer() * arg.denom());
                    let root = QuadraticIrrational::sqrt_of(&n)?;
                    return root.div(&QuadraticIrrational::rational(Rational::from(arg.denom())));
                }
                QuadraticIrrational::sqrt_of(arg.numer())
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(WordsError::Quadratic("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(WordsError::Quadratic(format!("unexpected token {other:?}"))),
        }
    }
}

impl FromStr for QuadraticIrrational {
    type Err = WordsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { toks: tokenize(s)?, pos: 0 };
        if p.toks.is_empty() {
            return Err(WordsError::Quadratic("empty expression".into()));
        }
        let v = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(WordsError::Quadratic(format!("trailing input in {s:?}")));
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(s: &str) -> QuadraticIrrational {
        s.parse().unwrap()
    }

    #[test]
    fn parses_common_forms() {
        let g = qi("(3-sqrt5)/2");
        assert_eq!(g, QuadraticIrrational::new(3, -1, 5, 2).unwrap());
        assert_eq!(qi("(3 - sqrt(5))/2"), g);
        assert_eq!(qi("1-sqrt2/2"), QuadraticIrrational::new(2, -1, 2, 2).unwrap());
        assert_eq!(qi("sqrt8"), qi("2*sqrt2"));
        assert_eq!(qi("2sqrt2"), qi("sqrt(8)"));
        assert!(qi("sqrt4").is_rational());
        assert_eq!(qi("0.25"), QuadraticIrrational::rational(Rational::from((1, 4))));
        assert!("sqrt2+sqrt3".parse::<QuadraticIrrational>().is_err());
        assert!("1/(sqrt2-sqrt2)".parse::<QuadraticIrrational>().is_err());
    }

    #[test]
    fn reciprocal_rationalizes() {
        let phi = qi("(1+sqrt5)/2");
        let inv = QuadraticIrrational::from_int(1).div(&phi).unwrap();
        assert_eq!(inv, phi.sub(&QuadraticIrrational::from_int(1)).unwrap());
    }

    #[test]
    fn floors_match_floating_point_at_small_indices() {
        let g = qi("(3-sqrt5)/2");
        for i in 0..2000i64 {
            let v = g.mul_int(&Integer::from(i));
            let want = (i as f64 * g.to_f64()).floor() as i64;
            assert_eq!(v.floor(), want, "i={i}");
        }
        assert_eq!(qi("-sqrt2").floor(), -2);
        assert_eq!(qi("-sqrt2").ceil(), -1);
        assert_eq!(qi("-7/2").floor(), -4);
    }

    #[test]
    fn floor_is_exact_at_huge_indices() {
        // floor(k * sqrt2) for k = 10^30 via isqrt(2 * 10^60).
        let k = Integer::from(Integer::u_pow_u(10, 30));
        let v = qi("sqrt2").mul_int(&k);
        let direct = (Integer::from(2) * Integer::from(&k * &k)).sqrt();
        assert_eq!(v.floor(), direct);
    }

    #[test]
    fn display_round_trips() {
        for s in ["(3-sqrt5)/2", "1-sqrt2/2", "sqrt3", "-2*sqrt7/3", "5/4", "0"] {
            let v = qi(s);
            assert_eq!(qi(&v.to_string()), v, "{s} -> {v}");
        }
    }

    #[test]
    fn fract_reduces_into_unit_interval() {
        let v = qi("7/2+sqrt2").fract();
        assert!(v.to_f64() >= 0.0 && v.to_f64() < 1.0);
        assert_eq!(v.floor(), 0);
        assert!(qi("sqrt2-1").is_positive());
        assert!(!qi("1-sqrt2").is_positive());
    }
}
