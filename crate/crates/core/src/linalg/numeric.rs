//! Dominant-eigenvalue quantities: spectral radius and Euclidean operator norm.
//!
//! Iterations run on bare MPFR floats at the matrix's working precision; the
//! returned radius combines the iteration's own error estimate with the
//! Frobenius norm of the input radii (a first-order perturbation estimate).

use rug::float::Round;
use rug::ops::Pow;
use rug::Float;

use super::matrix::Matrix;
use super::LinalgError;
use crate::precision::{bits_to_digits, BigReal};

const MAX_ITER: usize = 10_000;
const MAX_SQUARINGS: u32 = 512;
const STABLE_STEPS: usize = 3;
const RATE_WINDOW: usize = 32;

fn working_prec(m: &Matrix<BigReal>) -> u32 {
    m.data().iter().map(BigReal::prec).max().unwrap_or(64).max(64)
}

fn tolerance(prec: u32) -> Float {
    let digits = bits_to_digits(prec).saturating_sub(8).max(4);
    Float::with_val(64, Float::with_val(64, 10).pow(-(digits as i32)))
}

fn floats(m: &Matrix<BigReal>, prec: u32) -> Vec<Float> {
    m.data().iter().map(|x| Float::with_val(prec, x.value())).collect()
}

/// Frobenius norm of the entrywise radii, rounded up.
fn radius_frobenius(m: &Matrix<BigReal>) -> Float {
    let mut acc = Float::new(64);
    for x in m.data() {
        let r = x.radius();
        if !r.is_zero() {
            acc = Float::with_val_round(64, &acc + Float::with_val(64, r.square_ref()), Round::Up).0;
        }
    }
    Float::with_val_round(64, acc.sqrt_ref(), Round::Up).0
}

fn max_abs(v: &[Float]) -> Float {
    let mut best = Float::new(v.first().map_or(64, Float::prec));
    for x in v {
        if x.clone().abs() > best {
            best = x.clone().abs();
        }
    }
    best
}

fn dot(a: &[Float], b: &[Float], prec: u32) -> Float {
    let mut acc = Float::new(prec);
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

fn mat_vec(m: &[Float], n: usize, v: &[Float], prec: u32) -> Vec<Float> {
    (0..n)
        .map(|i| {
            let mut acc = Float::new(prec);
            for (a, x) in m[i * n..(i + 1) * n].iter().zip(v) {
                if !a.is_zero() {
                    acc += a * x;
                }
            }
            acc
        })
        .collect()
}

fn mat_mul(a: &[Float], b: &[Float], n: usize, prec: u32) -> Vec<Float> {
    let mut out = vec![Float::new(prec); n * n];
    for i in 0..n {
        for k in 0..n {
            let x = &a[i * n + k];
            if x.is_zero() {
                continue;
            }
            for j in 0..n {
                let y = &b[k * n + j];
                if !y.is_zero() {
                    out[i * n + j] += x * y;
                }
            }
        }
    }
    out
}

fn frob(a: &[Float], prec: u32) -> Float {
    dot(a, a, prec).sqrt()
}

enum Power {
    Converged { value: Float, residual: Float },
    Stalled,
}

/// Power iteration with a signed Rayleigh quotient and residual test.
fn power_iteration(m: &[Float], n: usize, prec: u32, tol: &Float) -> Power {
    let denom = ((n + 1) * (n + 1)) as f64;
    let mut v: Vec<Float> = (0..n).map(|i| Float::with_val(prec, 1.0 + i as f64 / denom)).collect();
    let mut stable = 0;
    let mut history: Vec<f64> = Vec::new();
    for it in 0..MAX_ITER {
        let w = mat_vec(m, n, &v, prec);
        let scale = max_abs(&w);
        if scale.is_zero() {
            return Power::Stalled;
        }
        let vv = dot(&v, &v, prec);
        let theta = Float::with_val(prec, dot(&v, &w, prec) / &vv);
        let mut res = Float::new(prec);
        for (wi, vi) in w.iter().zip(&v) {
            let d = Float::with_val(prec, wi - Float::with_val(prec, &theta * vi));
            res += d.square();
        }
        let residual = Float::with_val(prec, (res / &vv).sqrt());
        let rel = Float::with_val(64, &residual / Float::with_val(prec, theta.abs_ref()));
        if !theta.is_zero() && rel <= *tol {
            stable += 1;
            if stable >= STABLE_STEPS {
                return Power::Converged { value: theta.abs(), residual };
            }
        } else {
            stable = 0;
        }
        let rel_f = rel.to_f64();
        history.push(if rel_f.is_finite() { rel_f.max(f64::MIN_POSITIVE) } else { f64::MAX });
        if it >= RATE_WINDOW && it % RATE_WINDOW == 0 && stable == 0 {
            let then = history[it - RATE_WINDOW];
            let rate = (rel_f / then).powf(1.0 / RATE_WINDOW as f64);
            if !(rate < 0.999) {
                return Power::Stalled;
            }
            let needed = (tol.to_f64().ln() - rel_f.ln()) / rate.ln();
            if it as f64 + needed > MAX_ITER as f64 {
                return Power::Stalled;
            }
        }
        v = w.into_iter().map(|x| x / &scale).collect();
    }
    Power::Stalled
}

/// `rho(M) = lim ||M^(2^j)||^(1/2^j)` with max-abs renormalization.
fn repeated_squaring(m: &[Float], n: usize, prec: u32, tol: &Float) -> Result<(Float, Float), LinalgError> {
    let mut a = m.to_vec();
    let mut log_scale = Float::new(prec);
    let mut prev: Option<Float> = None;
    let mut stable = 0;
    let mut last_gap = Float::with_val(64, rug::float::Special::Infinity);
    for j in 0..=MAX_SQUARINGS {
        if j > 0 {
            a = mat_mul(&a, &a, n, prec);
            log_scale *= 2;
        }
        let s = max_abs(&a);
        if s.is_zero() {
            return Ok((Float::new(prec), Float::new(64)));
        }
        for x in a.iter_mut() {
            *x /= &s;
        }
        log_scale += s.ln();
        let mut log_est = Float::with_val(prec, &log_scale + frob(&a, prec).ln());
        log_est >>= j;
        let est = log_est.exp();
        if let Some(p) = &prev {
            let gap = Float::with_val(64, Float::with_val(prec, &est - p).abs());
            let rel = Float::with_val(64, &gap / &est);
            if rel <= *tol {
                stable += 1;
                if stable >= 2 && j >= 4 {
                    return Ok((est, gap));
                }
            } else {
                stable = 0;
            }
            last_gap = gap;
        }
        prev = Some(est);
    }
    Err(LinalgError::NonConvergence { method: "repeated squaring", residual: last_gap.to_f64() })
}

/// Spectral radius with an error estimate.
pub fn spectral_radius(m: &Matrix<BigReal>) -> Result<BigReal, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare(m.rows(), m.cols()));
    }
    let n = m.rows();
    if n == 0 || m.is_zero() {
        return Ok(BigReal::zero());
    }
    let prec = working_prec(m);
    let tol = tolerance(prec);
    let a = floats(m, prec);
    let input = radius_frobenius(m);
    let (value, err) = match power_iteration(&a, n, prec, &tol) {
        Power::Converged { value, residual } => (value, residual),
        Power::Stalled => repeated_squaring(&a, n, prec, &tol)?,
    };
    let err = Float::with_val_round(64, &err + &input, Round::Up).0;
    Ok(BigReal::with_radius(value, &err))
}

/// `M^T M`, computed with radius propagation.
pub fn gram(m: &Matrix<BigReal>) -> Matrix<BigReal> {
    let t = m.transpose();
    t.multiply(m).expect("transpose shapes agree")
}

/// Euclidean operator norm `sqrt(rho(M^T M))`.
pub fn op_norm(m: &Matrix<BigReal>) -> Result<BigReal, LinalgError> {
    if m.is_zero() {
        return Ok(BigReal::zero());
    }
    Ok(spectral_radius(&gram(m))?.sqrt())
}

/// Frobenius norm, an upper bound for the operator norm.
pub fn frobenius(m: &Matrix<BigReal>) -> BigReal {
    let mut acc = BigReal::zero();
    for x in m.data() {
        if !x.is_exact_zero() {
            acc = acc.add(&x.square());
        }
    }
    acc.sqrt()
}

/// Largest `|entry|` midpoint, used for renormalizing long products.
pub fn max_abs_entry(m: &Matrix<BigReal>) -> Float {
    let prec = working_prec(m);
    let v: Vec<Float> = m.data().iter().map(|x| Float::with_val(prec, x.value())).collect();
    max_abs(&v)
}
