//! The two rotation-number constants, evaluated in log space.
//!
//! Both are limits of alternating ratio estimates `exp(L_n)` whose exact
//! ingredients grow doubly exponentially, so only logarithms are formed.
//!
//! * alpha_star:  `L_n = (-1)^n (F_{n+2} ln tau_n - F_{n+1} ln tau_{n+1})`,
//!   product terms `(-1)^{n+1} F_{n+1} ln(tau_{n+1} / (tau_{n-1} tau_n))`.
//! * alpha_double_star: `L_n = (-1)^n (G_{n+1} ln t_n - G_n ln t_{n+1})`,
//!   product terms `(-1)^n G_n ln(t_n^2 t_{n-1} / t_{n+1})` after a leading
//!   factor 1/2.
//!
//! Consecutive estimates straddle the limit, so the last difference bounds
//! the truncation error.

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use super::bigreal::{digits_to_bits, sci_string, ten_pow_neg, BigReal};
use super::recursion::{RecursionKind, RecursionState};
use super::PrecisionError;

const MAX_BITS: u32 = 1 << 16;
const MAX_TERMS: i64 = 60;
const GUARD_DIGITS: u32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Constant {
    AlphaStar,
    AlphaDoubleStar,
}

impl Constant {
    pub fn name(self) -> &'static str {
        match self {
            Constant::AlphaStar => "alpha_star",
            Constant::AlphaDoubleStar => "alpha_double_star",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "alpha-star" | "alpha_star" | "alpha*" => Some(Constant::AlphaStar),
            "alpha-double-star" | "alpha_double_star" | "alpha**" => {
                Some(Constant::AlphaDoubleStar)
            }
            _ => None,
        }
    }
}

/// A computed constant with its convergence bookkeeping.
#[derive(Clone, Debug)]
pub struct ConstantValue {
    pub constant: Constant,
    pub value: BigReal,
    pub product: BigReal,
    pub terms: i64,
    pub bits: u32,
    pub digits: u32,
}

fn ln_integer(v: &Integer, bits: u32) -> BigReal {
    BigReal::from_integer(v, bits).ln()
}

fn ln_rational(q: &Rational, bits: u32) -> BigReal {
    let num = ln_integer(q.numer(), bits);
    if *q.denom() == 1 {
        num
    } else {
        num.sub(&ln_integer(q.denom(), bits))
    }
}

fn signed(x: BigReal, n: i64) -> BigReal {
    if n % 2 == 0 { x } else { x.neg() }
}

/// Shared state for evaluating estimates at one working precision.
struct Evaluator {
    constant: Constant,
    bits: u32,
    weights: RecursionState,
    seq: RecursionState,
}

impl Evaluator {
    fn new(constant: Constant, bits: u32) -> Self {
        let (w, s) = match constant {
            Constant::AlphaStar => (RecursionKind::Fibonacci, RecursionKind::Tau),
            Constant::AlphaDoubleStar => (RecursionKind::G, RecursionKind::T),
        };
        Evaluator { constant, bits, weights: RecursionState::new(w), seq: RecursionState::new(s) }
    }

    fn weight(&mut self, n: i64) -> BigReal {
        let w = self.weights.integer(n).expect("weight index is nonnegative");
        BigReal::from_integer(&w, self.bits.max(w.significant_bits()))
    }

    fn ln_seq(&mut self, n: i64) -> BigReal {
        let q = self.seq.term(n).expect("sequence index above base").clone();
        ln_rational(&q, self.bits)
    }

    fn log_estimate(&mut self, n: i64) -> BigReal {
        let (wa, wb) = match self.constant {
            Constant::AlphaStar => (self.weight(n + 2), self.weight(n + 1)),
            Constant::AlphaDoubleStar => (self.weight(n + 1), self.weight(n)),
        };
        let a = wa.mul(&self.ln_seq(n));
        let b = wb.mul(&self.ln_seq(n + 1));
        signed(a.sub(&b), n)
    }

    fn log_product_term(&mut self, n: i64) -> BigReal {
        match self.constant {
            Constant::AlphaStar => {
                let t = self.ln_seq(n + 1).sub(&self.ln_seq(n - 1)).sub(&self.ln_seq(n));
                signed(self.weight(n + 1).mul(&t), n + 1)
            }
            Constant::AlphaDoubleStar => {
                let tn = self.ln_seq(n);
                let t = tn.add(&tn).add(&self.ln_seq(n - 1)).sub(&self.ln_seq(n + 1));
                signed(self.weight(n).mul(&t), n)
            }
        }
    }

    fn log_product_start(&self) -> BigReal {
        match self.constant {
            Constant::AlphaStar => BigReal::zero(),
            Constant::AlphaDoubleStar => BigReal::from_i64(2, self.bits).ln().neg(),
        }
    }
}

/// The n-th ratio estimate `exp(L_n)` at `bits` of working precision.
pub fn ratio_estimate(constant: Constant, n: i64, bits: u32) -> BigReal {
    Evaluator::new(constant, bits).log_estimate(n).exp()
}

/// Partial product over terms `0..=last`.
pub fn product_partial(constant: Constant, last: i64, bits: u32) -> BigReal {
    let mut ev = Evaluator::new(constant, bits);
    let mut acc = ev.log_product_start();
    for n in 0..=last {
        acc = acc.add(&ev.log_product_term(n));
    }
    acc.exp()
}

/// The ratio form for alpha_star with unshifted Fibonacci weights,
/// `(-1)^n (F_{n+1} ln tau_n - F_n ln tau_{n+1})`. It converges, but not to
/// alpha_star; kept so tests can pin the distinction.
pub fn literal_ratio_estimate(n: i64, bits: u32) -> BigReal {
    let mut f = RecursionState::new(RecursionKind::Fibonacci);
    let mut tau = RecursionState::new(RecursionKind::Tau);
    let fa = BigReal::from_integer(&f.integer(n + 1).unwrap(), bits);
    let fb = BigReal::from_integer(&f.integer(n).unwrap(), bits);
    let la = ln_integer(&tau.integer(n).unwrap(), bits);
    let lb = ln_integer(&tau.integer(n + 1).unwrap(), bits);
    signed(fa.mul(&la).sub(&fb.mul(&lb)), n).exp()
}

fn attempt(constant: Constant, digits: u32, bits: u32) -> Result<ConstantValue, PrecisionError> {
    let mut ev = Evaluator::new(constant, bits);
    let mut prev = ev.log_estimate(0).exp();
    let mut log_prod = ev.log_product_start().add(&ev.log_product_term(0));
    let goal = digits + GUARD_DIGITS;
    let mut last_diff = String::new();
    for n in 1..MAX_TERMS {
        let cur = ev.log_estimate(n).exp();
        log_prod = log_prod.add(&ev.log_product_term(n));
        let diff = cur.distance(&prev);
        if diff < ten_pow_neg(goal) {
            // Consecutive estimates straddle the limit; widen by their gap.
            let value = cur.widen(&diff);
            let product = log_prod.exp().widen(&diff);
            if !value.radius_below_digits(digits) {
                return Err(PrecisionError::Exhausted {
                    bits,
                    last_diff: sci_string(&diff),
                    radius: value.radius_string(),
                });
            }
            if !value.overlaps(&product) {
                return Err(PrecisionError::CrossCheck {
                    ratio: value.to_decimal(digits + 2),
                    product: product.to_decimal(digits + 2),
                });
            }
            return Ok(ConstantValue { constant, value, product, terms: n, bits, digits });
        }
        last_diff = sci_string(&diff);
        prev = cur;
    }
    Err(PrecisionError::Exhausted { bits, last_diff, radius: prev.radius_string() })
}

/// Computes `constant` with error radius below `10^-digits`, doubling the
/// working precision on failure.
pub fn compute(constant: Constant, digits: u32) -> Result<ConstantValue, PrecisionError> {
    if digits == 0 {
        return Err(PrecisionError::NoDigits);
    }
    let mut bits = digits_to_bits(digits.saturating_mul(4)).min(MAX_BITS);
    loop {
        match attempt(constant, digits, bits) {
            Ok(v) => return Ok(v),
            Err(e @ PrecisionError::CrossCheck { .. }) => return Err(e),
            Err(e) => {
                if bits >= MAX_BITS {
                    return Err(e);
                }
                bits = (bits * 2).min(MAX_BITS);
            }
        }
    }
}

pub fn alpha_star(digits: u32) -> Result<BigReal, PrecisionError> {
    compute(Constant::AlphaStar, digits).map(|v| v.value)
}

pub fn alpha_double_star(digits: u32) -> Result<BigReal, PrecisionError> {
    compute(Constant::AlphaDoubleStar, digits).map(|v| v.value)
}

impl Constant {
    pub fn compute(self, digits: u32) -> Result<ConstantValue, PrecisionError> {
        compute(self, digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALPHA_STAR: &str = "0.749326546330367557943961948091344672091327";
    const ALPHA_DOUBLE_STAR: &str = "0.569279286584142330986485601616004654998409";

    fn agrees(v: &BigReal, printed: &str, digits: u32) {
        let target = BigReal::parse_decimal(printed, 256).unwrap();
        let gap = v.distance(&target);
        let tol = rug::Float::with_val(64, rug::Float::u_pow_u(10, digits)).recip();
        assert!(gap < tol, "{} vs {printed}", v.to_decimal(digits + 2));
    }

    #[test]
    fn alpha_star_forty_digits() {
        let v = compute(Constant::AlphaStar, 40).unwrap();
        agrees(&v.value, ALPHA_STAR, 40);
        assert!(v.value.radius_below_digits(40));
        assert!(v.value.overlaps(&v.product));
    }

    #[test]
    fn alpha_double_star_forty_digits() {
        let v = compute(Constant::AlphaDoubleStar, 40).unwrap();
        agrees(&v.value, ALPHA_DOUBLE_STAR, 40);
        assert!(v.value.overlaps(&v.product));
    }

    #[test]
    fn first_ratio_estimates_are_four_thirds() {
        let four_thirds = BigReal::from_i64(4, 200).div(&BigReal::from_i64(3, 200));
        for c in [Constant::AlphaStar, Constant::AlphaDoubleStar] {
            assert!(ratio_estimate(c, 0, 200).overlaps(&four_thirds), "{c:?}");
        }
        // Unshifted weights: tau_0^{F_1} / tau_1^{F_0} = 2/3.
        let two_thirds = BigReal::from_i64(2, 200).div(&BigReal::from_i64(3, 200));
        assert!(literal_ratio_estimate(0, 200).overlaps(&two_thirds));
    }

    #[test]
    fn unshifted_ratio_form_has_a_different_limit() {
        let lit = literal_ratio_estimate(11, 256);
        assert!(lit.to_decimal(12).starts_with("0.531721144"));
    }

    #[test]
    fn ratio_and_product_forms_agree_termwise() {
        for c in [Constant::AlphaStar, Constant::AlphaDoubleStar] {
            for n in 0..8 {
                let r = ratio_estimate(c, n, 300);
                let p = product_partial(c, n, 300);
                assert!(r.overlaps(&p), "{c:?} n={n}");
            }
        }
    }

    #[test]
    fn successive_differences_shrink_fast() {
        let bits = 400;
        let mut prev_gap: Option<f64> = None;
        for n in 1..=9 {
            let gap = ratio_estimate(Constant::AlphaStar, n, bits)
                .distance(&ratio_estimate(Constant::AlphaStar, n - 1, bits))
                .to_f64();
            if let Some(p) = prev_gap {
                assert!(gap < p, "n={n}");
            }
            prev_gap = Some(gap);
        }
    }

    #[test]
    fn refining_stays_inside_coarser_interval() {
        let coarse = alpha_star(12).unwrap();
        let fine = alpha_star(60).unwrap();
        assert!(coarse.lower() <= fine.value().clone() && fine.value().clone() <= coarse.upper());
        let coarse = alpha_double_star(12).unwrap();
        let fine = alpha_double_star(60).unwrap();
        assert!(coarse.overlaps(&fine));
        assert!(fine.value().clone() > 0 && fine.value().clone() < 1);
    }

    #[test]
    fn zero_digits_rejected() {
        assert_eq!(alpha_star(0).unwrap_err(), PrecisionError::NoDigits);
    }
}
