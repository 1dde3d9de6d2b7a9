use serde::Serialize;

use super::screen::{self, Fm};
use super::{JsrBounds, JsrError};
use crate::linalg::MatrixFamily;
use crate::precision::{digits_to_bits, BigReal};
use crate::words::SequenceSource;

/// Steps between renormalizations of the running product.
pub const RENORM_EVERY: u64 = 32;
/// Slack on rate comparisons in the extremality verdict.
pub const RATE_TOL: f64 = 1e-3;
/// A tail minimum more than this far (in natural-log units) below the
/// head minimum counts as residuals escaping to minus infinity.
pub const STRONG_DROP: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthRecord {
    pub n: u64,
    pub log_norm: f64,
    pub r_n: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub records: Vec<GrowthRecord>,
    pub rho_hat: f64,
    pub min_residual: f64,
    pub max_residual: f64,
    /// Least-squares slope of `log ||P_n||` against `n`.
    pub slope: f64,
    /// Same slope for the residuals, i.e. `slope - log rho_hat`.
    pub residual_slope: f64,
    /// First `n` with `P_n = 0`; records stop just before it.
    pub annihilated_at: Option<u64>,
}

impl GrowthReport {
    pub fn band_width(&self) -> f64 {
        self.max_residual - self.min_residual
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,log_norm,r_n,residual\n");
        for r in &self.records {
            s.push_str(&format!("{},{:.12e},{:.12e},{:.12e}\n", r.n, r.log_norm, r.r_n, r.residual));
        }
        s
    }

    /// Records with `lo <= n <= hi`.
    pub fn window(&self, lo: u64, hi: u64) -> impl Iterator<Item = &GrowthRecord> {
        self.records.iter().filter(move |r| r.n >= lo && r.n <= hi)
    }
}

fn slope(xs: &[(f64, f64)]) -> f64 {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return 0.0;
    }
    let mx = xs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = xs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = xs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Norm growth of `P_n = A_{x_n} ... A_{x_1}` for `n = 1..=len`.
///
/// The running product is kept in double precision and rescaled by a power
/// of two every [`RENORM_EVERY`] steps, so the scale is tracked as an exact
/// integer exponent.
pub fn growth_report(
    fam: &MatrixFamily,
    source: &SequenceSource,
    len: u64,
    rho_hat: &BigReal,
) -> Result<GrowthReport, JsrError> {
    if len == 0 {
        return Err(JsrError::ZeroLength);
    }
    let rho = rho_hat.to_f64();
    if !(rho > 0.0) {
        return Err(JsrError::NonPositiveRate(rho));
    }
    let symbols = source.fill(1, len as usize)?;
    if let Some(&s) = symbols.iter().find(|&&s| s as usize >= fam.len()) {
        return Err(JsrError::SymbolOutOfRange { symbol: s, family: fam.len() });
    }
    let members: Vec<Fm> = fam.numeric(digits_to_bits(30))?.iter().map(screen::to_f64).collect();
    let log_rho = rho.ln();
    let d = fam.dim();
    let mut p = Fm::identity(d, d);
    let mut exp2: i64 = 0;
    let mut records = Vec::with_capacity(len as usize);
    let mut annihilated_at = None;
    for (i, &s) in symbols.iter().enumerate() {
        let n = i as u64 + 1;
        p = &members[s as usize] * &p;
        if screen::is_zero(&p) {
            annihilated_at = Some(n);
            break;
        }
        if n.is_multiple_of(RENORM_EVERY) {
            let big = p.amax();
            let e = big.log2().floor() as i32;
            p *= 2f64.powi(-e);
            exp2 += e as i64;
        }
        let log_norm = exp2 as f64 * std::f64::consts::LN_2 + screen::op_norm(&p).ln();
        records.push(GrowthRecord {
            n,
            log_norm,
            r_n: (log_norm / n as f64).exp(),
            residual: log_norm - n as f64 * log_rho,
        });
    }
    let res = |f: fn(f64, f64) -> f64, init| records.iter().map(|r| r.residual).fold(init, f);
    let (min_residual, max_residual) = if records.is_empty() {
        (f64::NAN, f64::NAN)
    } else {
        (res(f64::min, f64::INFINITY), res(f64::max, f64::NEG_INFINITY))
    };
    let pts: Vec<(f64, f64)> = records.iter().map(|r| (r.n as f64, r.log_norm)).collect();
    let s = slope(&pts);
    Ok(GrowthReport {
        records,
        rho_hat: rho,
        min_residual,
        max_residual,
        slope: s,
        residual_slope: s - log_rho,
        annihilated_at,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ConsistentWithStrong,
    ConsistentWithWeakOnly,
    Inconsistent,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::ConsistentWithStrong => "consistent-with-strong",
            Verdict::ConsistentWithWeakOnly => "consistent-with-weak-only",
            Verdict::Inconsistent => "inconsistent",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Extremality {
    pub verdict: Verdict,
    /// Largest `r_n` over the second half of the run.
    pub limsup_estimate: f64,
    pub lower: f64,
    pub tolerance: f64,
    /// Head minimum residual minus tail minimum residual.
    pub tail_drop: f64,
    pub band_width: f64,
    pub annihilated_at: Option<u64>,
}

/// Finite-data verdict against `bounds`, with the growth rate referenced to
/// `bounds.lower`. `Inconsistent` when the tail `limsup r_n` sits below the
/// lower bound by more than [`RATE_TOL`]; otherwise strong when the residual
/// minimum does not sink between the two halves of the run.
pub fn extremality_diagnostic(
    fam: &MatrixFamily,
    source: &SequenceSource,
    len: u64,
    bounds: &JsrBounds,
) -> Result<Extremality, JsrError> {
    let lower = bounds.lower.to_f64();
    if lower == 0.0 {
        // Every sequence attains a zero joint spectral radius.
        return Ok(Extremality {
            verdict: Verdict::ConsistentWithStrong,
            limsup_estimate: 0.0,
            lower,
            tolerance: RATE_TOL,
            tail_drop: 0.0,
            band_width: 0.0,
            annihilated_at: None,
        });
    }
    let rep = growth_report(fam, source, len, &bounds.lower)?;
    if rep.annihilated_at.is_some() {
        return Ok(Extremality {
            verdict: Verdict::Inconsistent,
            limsup_estimate: 0.0,
            lower,
            tolerance: RATE_TOL,
            tail_drop: f64::INFINITY,
            band_width: rep.band_width(),
            annihilated_at: rep.annihilated_at,
        });
    }
    let half = len / 2;
    let limsup = rep.window(half.max(1), len).map(|r| r.r_n).fold(0.0, f64::max);
    let head = rep.window(1, half.max(1)).map(|r| r.residual).fold(f64::INFINITY, f64::min);
    let tail = rep.window(half + 1, len).map(|r| r.residual).fold(f64::INFINITY, f64::min);
    let drop = if tail.is_finite() { head - tail } else { 0.0 };
    let verdict = if limsup < lower - RATE_TOL {
        Verdict::Inconsistent
    } else if drop <= STRONG_DROP {
        Verdict::ConsistentWithStrong
    } else {
        Verdict::ConsistentWithWeakOnly
    };
    Ok(Extremality {
        verdict,
        limsup_estimate: limsup,
        lower,
        tolerance: RATE_TOL,
        tail_drop: drop,
        band_width: rep.band_width(),
        annihilated_at: None,
    })
}
