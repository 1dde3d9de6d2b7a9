//! Arbitrary-precision reals with a conservative absolute error radius.
//!
//! A [`BigReal`] is a midpoint `val` (an MPFR float at some working
//! precision) together with `rad >= 0` such that the exact quantity being
//! tracked lies in `[val - rad, val + rad]`. Every operation adds the
//! propagated input error and, when MPFR reports an inexact result, a
//! half-ulp rounding term. Radii are kept at 64 bits and always rounded up.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::{Assign, Float, Integer, Rational};

use super::PrecisionError;

const RAD_PREC: u32 = 64;

/// Bits needed to carry `digits` decimal digits, plus a small guard.
pub fn digits_to_bits(digits: u32) -> u32 {
    ((digits as f64) * std::f64::consts::LOG2_10).ceil() as u32 + 16
}

/// Decimal digits faithfully represented by `bits` of mantissa.
pub fn bits_to_digits(bits: u32) -> u32 {
    ((bits as f64) * std::f64::consts::LOG10_2).floor() as u32
}

fn rad_zero() -> Float {
    Float::new(RAD_PREC)
}

fn up_add(a: &Float, b: &Float) -> Float {
    Float::with_val_round(RAD_PREC, a + b, Round::Up).0
}

fn up_mul(a: &Float, b: &Float) -> Float {
    Float::with_val_round(RAD_PREC, a * b, Round::Up).0
}

fn up_div(a: &Float, b: &Float) -> Float {
    Float::with_val_round(RAD_PREC, a / b, Round::Up).0
}

fn abs_up(x: &Float) -> Float {
    Float::with_val_round(RAD_PREC, x.abs_ref(), Round::Up).0
}

fn abs_down(x: &Float) -> Float {
    Float::with_val_round(RAD_PREC, x.abs_ref(), Round::Down).0
}

/// Half-ulp bound `|v| * 2^-prec` for a round-to-nearest result.
fn rounding_term(v: &Float) -> Float {
    let mut t = abs_up(v);
    t >>= v.prec();
    t
}

fn with_rounding(rad: Float, v: &Float, ord: Ordering) -> Float {
    if ord == Ordering::Equal {
        rad
    } else {
        up_add(&rad, &rounding_term(v))
    }
}

pub fn ten_pow_neg(digits: u32) -> Float {
    // 10^-d rounded down, so that "radius < ten_pow_neg(d)" is never optimistic.
    let p = Float::with_val(RAD_PREC, Float::u_pow_u(10, digits));
    Float::with_val_round(RAD_PREC, 1 / &p, Round::Down).0
}

#[derive(Clone, Debug)]
pub struct BigReal {
    val: Float,
    rad: Float,
}

impl BigReal {
    /// Exact zero. Carries minimal precision; arithmetic adopts the larger
    /// precision of its operands.
    pub fn zero() -> Self {
        BigReal { val: Float::new(1), rad: rad_zero() }
    }

    pub fn one() -> Self {
        BigReal { val: Float::with_val(1, 1), rad: rad_zero() }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        let (val, ord) = Float::with_val_round(prec, v, Round::Nearest);
        let rad = with_rounding(rad_zero(), &val, ord);
        BigReal { val, rad }
    }

    pub fn from_integer(v: &Integer, prec: u32) -> Self {
        let (val, ord) = Float::with_val_round(prec, v, Round::Nearest);
        let rad = with_rounding(rad_zero(), &val, ord);
        BigReal { val, rad }
    }

    pub fn from_rational(v: &Rational, prec: u32) -> Self {
        let (val, ord) = Float::with_val_round(prec, v, Round::Nearest);
        let rad = with_rounding(rad_zero(), &val, ord);
        BigReal { val, rad }
    }

    /// Takes an exactly known float (no error) at its own precision.
    pub fn from_float_exact(val: Float) -> Self {
        BigReal { val, rad: rad_zero() }
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        let (val, ord) = Float::with_val_round(prec, v, Round::Nearest);
        let rad = with_rounding(rad_zero(), &val, ord);
        BigReal { val, rad }
    }

    /// Parses a decimal literal such as `0.7493` or `-1.5e-3`.
    pub fn parse_decimal(s: &str, prec: u32) -> Result<Self, PrecisionError> {
        let parsed = Float::parse(s.trim())
            .map_err(|e| PrecisionError::Parse(format!("{s:?}: {e}")))?;
        let (val, ord) = Float::with_val_round(prec, parsed, Round::Nearest);
        let rad = with_rounding(rad_zero(), &val, ord);
        Ok(BigReal { val, rad })
    }

    /// Midpoint plus an explicit radius.
    pub fn with_radius(val: Float, rad: &Float) -> Self {
        BigReal { val, rad: abs_up(rad) }
    }

    pub fn value(&self) -> &Float {
        &self.val
    }

    pub fn radius(&self) -> &Float {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.val.prec()
    }

    pub fn to_f64(&self) -> f64 {
        self.val.to_f64()
    }

    pub fn radius_f64(&self) -> f64 {
        Float::with_val_round(53, &self.rad, Round::Up).0.to_f64()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.val.is_zero() && self.rad.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.val.is_finite() && self.rad.is_finite()
    }

    /// Lower end of the enclosure, rounded down.
    pub fn lower(&self) -> Float {
        let p = self.prec().max(RAD_PREC);
        Float::with_val_round(p, &self.val - &self.rad, Round::Down).0
    }

    /// Upper end of the enclosure, rounded up.
    pub fn upper(&self) -> Float {
        let p = self.prec().max(RAD_PREC);
        Float::with_val_round(p, &self.val + &self.rad, Round::Up).0
    }

    /// Re-rounds the midpoint to `prec` bits, widening the radius as needed.
    pub fn round_to(&self, prec: u32) -> Self {
        let (val, ord) = Float::with_val_round(prec, &self.val, Round::Nearest);
        let rad = with_rounding(self.rad.clone(), &val, ord);
        BigReal { val, rad }
    }

    /// Adds `extra` to the error radius (e.g. a truncation estimate).
    pub fn widen(&self, extra: &Float) -> Self {
        BigReal { val: self.val.clone(), rad: up_add(&self.rad, &abs_up(extra)) }
    }

    fn op_prec(&self, o: &Self) -> u32 {
        self.prec().max(o.prec())
    }

    pub fn add(&self, o: &Self) -> Self {
        let (val, ord) = Float::with_val_round(self.op_prec(o), &self.val + &o.val, Round::Nearest);
        let rad = with_rounding(up_add(&self.rad, &o.rad), &val, ord);
        BigReal { val, rad }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let (val, ord) = Float::with_val_round(self.op_prec(o), &self.val - &o.val, Round::Nearest);
        let rad = with_rounding(up_add(&self.rad, &o.rad), &val, ord);
        BigReal { val, rad }
    }

    pub fn neg(&self) -> Self {
        BigReal { val: Float::with_val(self.prec(), -&self.val), rad: self.rad.clone() }
    }

    pub fn abs(&self) -> Self {
        BigReal { val: Float::with_val(self.prec(), self.val.abs_ref()), rad: self.rad.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (val, ord) = Float::with_val_round(self.op_prec(o), &self.val * &o.val, Round::Nearest);
        let mut rad = rad_zero();
        if !o.rad.is_zero() {
            rad = up_add(&rad, &up_mul(&abs_up(&self.val), &o.rad));
        }
        if !self.rad.is_zero() {
            rad = up_add(&rad, &up_mul(&abs_up(&o.val), &self.rad));
            rad = up_add(&rad, &up_mul(&self.rad, &o.rad));
        }
        let rad = with_rounding(rad, &val, ord);
        BigReal { val, rad }
    }

    pub fn mul_integer(&self, k: &Integer) -> Self {
        self.mul(&BigReal::from_integer(k, self.prec().max(k.significant_bits().max(1))))
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Division; the radius is infinite when the divisor's enclosure
    /// contains zero.
    pub fn div(&self, o: &Self) -> Self {
        let p = self.op_prec(o);
        let b_lo = abs_down(&o.val);
        if b_lo <= o.rad || o.val.is_zero() {
            let mut rad = rad_zero();
            rad.assign(rug::float::Special::Infinity);
            let val = if o.val.is_zero() { Float::with_val(p, rug::float::Special::Nan) } else {
                Float::with_val(p, &self.val / &o.val)
            };
            return BigReal { val, rad };
        }
        let (val, ord) = Float::with_val_round(p, &self.val / &o.val, Round::Nearest);
        let mut rad = rad_zero();
        if !self.rad.is_zero() || !o.rad.is_zero() {
            // (|a| rb + |b| ra) / (|b| (|b| - rb))
            let num = up_add(
                &up_mul(&abs_up(&self.val), &o.rad),
                &up_mul(&abs_up(&o.val), &self.rad),
            );
            let gap = Float::with_val_round(RAD_PREC, &b_lo - &o.rad, Round::Down).0;
            let den = Float::with_val_round(RAD_PREC, &b_lo * &gap, Round::Down).0;
            rad = up_div(&num, &den);
        }
        let rad = with_rounding(rad, &val, ord);
        BigReal { val, rad }
    }

    /// Exact division by a power of two.
    pub fn div_pow2(&self, k: u32) -> Self {
        let mut val = self.val.clone();
        val >>= k;
        let mut rad = self.rad.clone();
        rad >>= k;
        BigReal { val, rad }
    }

    pub fn div_u64(&self, k: u64) -> Self {
        self.div(&BigReal::from_integer(&Integer::from(k), self.prec().max(64)))
    }

    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        let lo = self.lower();
        if lo > 0 {
            let (val, ord) = Float::with_val_round(p, self.val.sqrt_ref(), Round::Nearest);
            let mut rad = rad_zero();
            if !self.rad.is_zero() {
                let s = Float::with_val_round(RAD_PREC, lo.sqrt_ref(), Round::Down).0;
                rad = up_div(&self.rad, &s);
            }
            let rad = with_rounding(rad, &val, ord);
            BigReal { val, rad }
        } else {
            let clipped = if self.val > 0 { self.val.clone() } else { Float::new(p) };
            let val = Float::with_val(p, clipped.sqrt_ref());
            let hi = Float::with_val_round(RAD_PREC, self.upper().max(&Float::new(RAD_PREC)).sqrt_ref(), Round::Up).0;
            BigReal { val, rad: hi }
        }
    }

    /// Natural logarithm; infinite radius unless the enclosure is positive.
    pub fn ln(&self) -> Self {
        let p = self.prec();
        let lo = self.lower();
        if !(lo > 0) {
            let mut rad = rad_zero();
            rad.assign(rug::float::Special::Infinity);
            return BigReal { val: Float::with_val(p, rug::float::Special::Nan), rad };
        }
        let (val, ord) = Float::with_val_round(p, self.val.ln_ref(), Round::Nearest);
        let mut rad = rad_zero();
        if !self.rad.is_zero() {
            // -ln(1 - r/a) <= r / (a - r)
            let den = Float::with_val_round(RAD_PREC, &lo, Round::Down).0;
            rad = up_div(&self.rad, &den);
        }
        let rad = with_rounding(rad, &val, ord);
        BigReal { val, rad }
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let (val, ord) = Float::with_val_round(p, self.val.exp_ref(), Round::Nearest);
        let mut rad = rad_zero();
        if !self.rad.is_zero() {
            // e^a (e^r - 1), with a factor 2 absorbing the rounding of e^a.
            let em1 = Float::with_val_round(RAD_PREC, self.rad.exp_m1_ref(), Round::Up).0;
            let twice = up_mul(&abs_up(&val), &Float::with_val(RAD_PREC, 2));
            rad = up_mul(&twice, &em1);
        }
        let rad = with_rounding(rad, &val, ord);
        BigReal { val, rad }
    }

    /// `self^(1/k)` for positive `self`, via `exp(ln(self)/k)`.
    pub fn root(&self, k: u64) -> Self {
        if self.is_exact_zero() {
            return BigReal::zero();
        }
        self.ln().div_u64(k).exp()
    }

    pub fn max_by_value<'a>(&'a self, o: &'a Self) -> &'a Self {
        if o.val > self.val { o } else { self }
    }

    /// Compares midpoints.
    pub fn cmp_value(&self, o: &Self) -> Ordering {
        self.val.partial_cmp(&o.val).unwrap_or(Ordering::Equal)
    }

    /// True when the enclosures overlap (the values may be equal).
    pub fn overlaps(&self, o: &Self) -> bool {
        self.lower() <= o.upper() && o.lower() <= self.upper()
    }

    /// `self <= o` holds for some admissible values, i.e. it is not
    /// certainly false.
    pub fn possibly_le(&self, o: &Self) -> bool {
        self.lower() <= o.upper()
    }

    /// `self < o` holds for every admissible value.
    pub fn certainly_lt(&self, o: &Self) -> bool {
        self.upper() < o.lower()
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.lower() <= x && self.upper() >= x
    }

    /// Radius strictly below `10^-digits`.
    pub fn radius_below_digits(&self, digits: u32) -> bool {
        self.rad < ten_pow_neg(digits)
    }

    /// `|self - o|` midpoint distance, rounded up, at 64 bits.
    pub fn distance(&self, o: &Self) -> Float {
        let p = self.op_prec(o);
        abs_up(&Float::with_val_round(p, &self.val - &o.val, Round::Up).0)
    }

    /// Fixed-point decimal rendering with `digits` digits after the point.
    pub fn to_decimal(&self, digits: u32) -> String {
        format_fixed(&self.val, digits)
    }

    /// Short scientific rendering of the radius, e.g. `3.2e-45`.
    pub fn radius_string(&self) -> String {
        sci_string(&self.rad)
    }
}

/// Three-significant-digit scientific rendering, rounded up.
pub fn sci_string(x: &Float) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if !x.is_finite() {
        return "inf".to_string();
    }
    let r = Float::with_val_round(RAD_PREC, x, Round::Up).0;
    r.to_string_radix_round(10, Some(3), Round::Up)
}

/// Renders `v` with exactly `digits` decimals, rounding half away from zero.
pub fn format_fixed(v: &Float, digits: u32) -> String {
    if v.is_nan() {
        return "nan".to_string();
    }
    if v.is_infinite() {
        return if v.is_sign_negative() { "-inf".into() } else { "inf".into() };
    }
    let scale = Integer::from(Integer::u_pow_u(10, digits));
    let p = v.prec() + scale.significant_bits() + 8;
    let scaled = Float::with_val(p, v * &scale);
    let mut n = scaled.to_integer().unwrap_or_default();
    let neg = n < 0;
    n.abs_mut();
    let mut s = n.to_string();
    let d = digits as usize;
    if s.len() <= d {
        s = format!("{}{}", "0".repeat(d + 1 - s.len()), s);
    }
    let split = s.len() - d;
    let (int, frac) = s.split_at(split);
    let body = if d == 0 { int.to_string() } else { format!("{int}.{frac}") };
    if neg && n != 0 { format!("-{body}") } else { body }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = bits_to_digits(self.prec()).clamp(1, 60);
        write!(f, "{}", self.to_decimal(digits))
    }
}
