use rayon::prelude::*;
use serde::Serialize;

use super::screen::{self, Fm};
use super::JsrError;
use crate::families::kron_families;
use crate::linalg::{op_norm, product_along, spectral_radius, Matrix, MatrixFamily};
use crate::precision::{digits_to_bits, BigReal};
use crate::words::Word;

/// Relative slack for double-precision screening: every product whose
/// screened value is within this factor of the level best is re-evaluated
/// at full precision.
pub const SCREEN_TOL: f64 = 1e-9;
/// At most this many near-ties per level are re-evaluated; the rest are
/// covered by widening the result by `SCREEN_TOL`.
pub const MAX_CERTIFIED: usize = 8;
/// Looser slack for screened spectral radii, which lose about half the
/// digits on defective eigenvalues.
pub const RATE_SCREEN_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct JsrConfig {
    pub max_depth: usize,
    /// Maximum number of products enumerated over all levels.
    pub budget: u64,
    pub digits: u32,
}

impl Default for JsrConfig {
    fn default() -> Self {
        JsrConfig { max_depth: 10, budget: 4_000_000, digits: 50 }
    }
}

#[derive(Clone, Debug)]
pub struct JsrBounds {
    pub lower: BigReal,
    pub upper: BigReal,
    /// Deepest fully enumerated level.
    pub depth: usize,
    pub requested_depth: usize,
    pub witness: Word,
    /// Level whose maximal norm gives `upper`.
    pub upper_level: usize,
    /// Set when the product budget stopped the enumeration early.
    pub partial: bool,
    pub products: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JsrSummary {
    pub lower: String,
    pub lower_radius: String,
    pub upper: String,
    pub upper_radius: String,
    pub depth: usize,
    pub requested_depth: usize,
    pub witness: String,
    pub upper_level: usize,
    pub partial: bool,
    pub products: u64,
}

impl JsrBounds {
    pub fn summary(&self, digits: u32) -> JsrSummary {
        JsrSummary {
            lower: self.lower.to_decimal(digits),
            lower_radius: self.lower.radius_string(),
            upper: self.upper.to_decimal(digits),
            upper_radius: self.upper.radius_string(),
            depth: self.depth,
            requested_depth: self.requested_depth,
            witness: self.witness.to_string(),
            upper_level: self.upper_level,
            partial: self.partial,
            products: self.products,
        }
    }

    pub fn gap(&self) -> f64 {
        self.upper.to_f64() - self.lower.to_f64()
    }

    /// Does `x` lie in `[lower, upper]`, radii included?
    pub fn brackets(&self, x: f64) -> bool {
        self.lower.lower().to_f64() <= x && x <= self.upper.upper().to_f64()
    }
}

struct Node {
    word: Vec<u32>,
    prod: Fm,
}

/// Brute-force bounds `max rho(P_w)^(1/|w|) <= JSR <= min_k max_{|w|=k} ||P_w||^(1/k)`
/// over all words of length at most `max_depth`.
///
/// Words with a zero product are dropped (all their extensions vanish).
/// Spectral radii are screened only on Lyndon words, since rotations share
/// the spectral radius and proper powers repeat a shorter word's rate.
pub fn jsr_bounds(fam: &MatrixFamily, cfg: &JsrConfig) -> Result<JsrBounds, JsrError> {
    if cfg.max_depth == 0 {
        return Err(JsrError::ZeroDepth);
    }
    let prec = digits_to_bits(cfg.digits + 10);
    let exact = fam.numeric(prec)?;
    let fmembers: Vec<Fm> = exact.iter().map(screen::to_f64).collect();
    let m = fam.len();

    let mut frontier: Vec<Node> =
        (0..m as u32).map(|s| Node { word: vec![s], prod: fmembers[s as usize].clone() }).collect();
    let mut products = m as u64;
    let mut pool: Vec<(f64, Vec<u32>)> = Vec::new();
    let mut upper: Option<(BigReal, usize)> = None;
    let mut depth = 0;
    let mut partial = false;

    for k in 1..=cfg.max_depth {
        if k > 1 {
            let next = products + (frontier.len() * m) as u64;
            if next > cfg.budget {
                partial = true;
                break;
            }
            products = next;
            frontier = frontier
                .par_iter()
                .flat_map_iter(|node| {
                    fmembers.iter().enumerate().map(move |(s, a)| {
                        let mut word = node.word.clone();
                        word.push(s as u32);
                        Node { word, prod: a * &node.prod }
                    })
                })
                .collect();
        }
        frontier.retain(|n| !screen::is_zero(&n.prod));
        depth = k;

        let level = level_max_norm(&frontier, &exact)?;
        let bound = level.root(k as u64);
        if upper.as_ref().is_none_or(|(u, _)| bound.cmp_value(u).is_lt()) {
            upper = Some((bound, k));
        }

        let lyndon: Vec<(f64, Vec<u32>)> = frontier
            .par_iter()
            .filter(|n| screen::is_lyndon(&n.word))
            .map(|n| (screen::spectral_radius(&n.prod).powf(1.0 / k as f64), n.word.clone()))
            .collect();
        pool.extend(lyndon);

        if frontier.is_empty() {
            break;
        }
    }

    let (lower, witness) = certify_lower(pool, &exact)?;
    let (upper, upper_level) = upper.expect("level 1 always runs");
    Ok(JsrBounds {
        lower,
        upper,
        depth,
        requested_depth: cfg.max_depth,
        witness: Word::new(witness, m as u32)?,
        upper_level,
        partial,
        products,
    })
}

/// Largest operator norm on one level, screened in double precision.
fn level_max_norm(frontier: &[Node], exact: &[Matrix<BigReal>]) -> Result<BigReal, JsrError> {
    if frontier.is_empty() {
        return Ok(BigReal::zero());
    }
    // Frobenius bounds the operator norm, so sorting by it lets the scan
    // stop as soon as no remaining product can reach the running maximum.
    let mut order: Vec<(f64, usize)> = frontier.iter().enumerate().map(|(i, n)| (n.prod.norm(), i)).collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut best = 0.0f64;
    let mut scored: Vec<(f64, usize)> = Vec::new();
    for &(frob, i) in &order {
        if frob < best * (1.0 - SCREEN_TOL) {
            break;
        }
        let v = screen::op_norm(&frontier[i].prod);
        best = best.max(v);
        scored.push((v, i));
    }
    let mut cands: Vec<(f64, usize)> = scored.into_iter().filter(|&(v, _)| v >= best * (1.0 - SCREEN_TOL)).collect();
    cands.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| frontier[a.1].word.cmp(&frontier[b.1].word)));
    let truncated = cands.len() > MAX_CERTIFIED;
    cands.truncate(MAX_CERTIFIED);
    let mut out: Option<BigReal> = None;
    for (_, i) in cands {
        let p = product_along(exact, &frontier[i].word)?;
        let v = op_norm(&p)?;
        out = Some(match out {
            Some(o) if o.cmp_value(&v).is_ge() => o,
            _ => v,
        });
    }
    let mut out = out.unwrap();
    if truncated {
        let extra = rug::Float::with_val(64, out.to_f64() * SCREEN_TOL);
        out = out.widen(&extra);
    }
    Ok(out)
}

/// Re-evaluates the best screened spectral rates at full precision; the
/// witness is the shortest, then lexicographically first, word whose
/// certified rate cannot be separated from the maximum.
fn certify_lower(mut pool: Vec<(f64, Vec<u32>)>, exact: &[Matrix<BigReal>]) -> Result<(BigReal, Vec<u32>), JsrError> {
    pool.sort_by(|a, b| {
        b.0.total_cmp(&a.0).then(a.1.len().cmp(&b.1.len())).then_with(|| a.1.cmp(&b.1))
    });
    let best = pool.first().map_or(0.0, |p| p.0);
    if best == 0.0 {
        let w = pool.into_iter().next().map_or(vec![0], |p| p.1);
        return Ok((BigReal::zero(), w));
    }
    let mut certified = Vec::new();
    for (_, w) in pool.into_iter().take_while(|p| p.0 >= best * (1.0 - RATE_SCREEN_TOL)).take(MAX_CERTIFIED) {
        let p = product_along(exact, &w)?;
        let rate = spectral_radius(&p)?.root(w.len() as u64);
        certified.push((rate, w));
    }
    let max = certified.iter().map(|c| &c.0).fold(&certified[0].0, |a, b| a.max_by_value(b)).clone();
    let (_, witness) = certified
        .iter()
        .filter(|c| c.0.overlaps(&max))
        .min_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| a.1.cmp(&b.1)))
        .unwrap();
    Ok((max, witness.clone()))
}

#[derive(Clone, Debug, Serialize)]
pub struct KronCheck {
    pub family: JsrSummary,
    pub components: Vec<JsrSummary>,
    pub product_lower: String,
    pub product_upper: String,
    pub intersects: bool,
}

/// Compares the bounds of the Kronecker family over `pairs` with the
/// product of the component bounds; the two intervals must intersect.
pub fn kron_jsr_check(pairs: &[MatrixFamily], cfg: &JsrConfig) -> Result<KronCheck, JsrError> {
    let fam = kron_families(pairs)?;
    let whole = jsr_bounds(&fam, cfg)?;
    let parts = pairs.iter().map(|p| jsr_bounds(p, cfg)).collect::<Result<Vec<_>, _>>()?;
    let mut lo = BigReal::one();
    let mut hi = BigReal::one();
    for b in &parts {
        lo = lo.mul(&b.lower);
        hi = hi.mul(&b.upper);
    }
    let intersects = whole.lower.possibly_le(&hi) && lo.possibly_le(&whole.upper);
    Ok(KronCheck {
        family: whole.summary(cfg.digits),
        components: parts.iter().map(|b| b.summary(cfg.digits)).collect(),
        product_lower: lo.to_decimal(cfg.digits),
        product_upper: hi.to_decimal(cfg.digits),
        intersects,
    })
}
