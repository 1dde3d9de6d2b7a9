//! The end-to-end acceptance checks, shared by the `verify` command and the
//! acceptance integration test. Payloads hold no timings so that repeated
//! runs serialize identically.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Integer;
use serde::Serialize;
use serde_json::{json, Value};

use crate::families::{btv_pair, check_printed_b, check_printed_d, example_p2, jb_pair, toy_family, Param};
use crate::jsr::{extremality_diagnostic, growth_report, jsr_bounds, kron_jsr_check, JsrConfig, Verdict};
use crate::lift::{
    binary_words, complexity_transfer, one_per_block, restricted_nonzero, survives, verify_encode_product,
    verify_feqt,
};
use crate::linalg::{op_norm, spectral_radius, Matrix, MatrixFamily};
use crate::precision::{alpha_double_star, alpha_star, digits_to_bits, BigReal};
use crate::words::{complexity_profile, parse_source, WindowPolicy, Word};

pub const PRINTED_ALPHA_STAR: &str = "0.749326546330367557943961948091344672091327";
pub const PRINTED_ALPHA_DOUBLE_STAR: &str = "0.569279286584142330986485601616004654998409";
pub const GAMMA: &str = "(3-sqrt5)/2";
pub const BETA: &str = "1-sqrt2/2";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteKind {
    Quick,
    Full,
}

impl std::str::FromStr for SuiteKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "quick" => Ok(SuiteKind::Quick),
            "full" => Ok(SuiteKind::Full),
            _ => Err(format!("unknown suite {s:?} (expected quick or full)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub details: Value,
}

fn result(id: u32, name: &str, passed: bool, details: Value) -> CriterionResult {
    CriterionResult { id, name: name.to_string(), passed, details }
}

fn failed(id: u32, name: &str, err: impl std::fmt::Display) -> CriterionResult {
    result(id, name, false, json!({ "error": err.to_string() }))
}

macro_rules! attempt {
    ($id:expr, $name:expr, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return failed($id, $name, err),
        }
    };
}

fn agrees_with_printed(v: &BigReal, printed: &str, digits: u32) -> bool {
    let prec = digits_to_bits(digits + 20);
    let p = BigReal::parse_decimal(printed, prec).expect("printed constant parses");
    let tol = BigReal::parse_decimal(&format!("1e-{digits}"), prec).unwrap();
    v.radius_f64() < tol.to_f64() && v.distance(&p) < *tol.value()
}

/// Both constants to 40 digits, under 10 s each.
pub fn constants() -> CriterionResult {
    const NAME: &str = "constants to 40 digits";
    let mut details = Vec::new();
    let mut ok = true;
    for (name, printed, f) in [
        ("alpha_star", PRINTED_ALPHA_STAR, alpha_star as fn(u32) -> _),
        ("alpha_double_star", PRINTED_ALPHA_DOUBLE_STAR, alpha_double_star as fn(u32) -> _),
    ] {
        let t = Instant::now();
        let v = attempt!(1, NAME, f(40));
        let fast = t.elapsed() < Duration::from_secs(10);
        let good = agrees_with_printed(&v, printed, 40);
        ok &= fast && good;
        details.push(json!({
            "constant": name,
            "value": v.to_decimal(40),
            "printed": printed,
            "agrees": good,
            "under_10s": fast,
        }));
    }
    result(1, NAME, ok, Value::Array(details))
}

/// Kronecker family and its lift against the printed matrices.
pub fn explicit_matrices() -> CriterionResult {
    const NAME: &str = "explicit 4x4 and 28x28 matrices";
    let (d, b) = attempt!(2, NAME, example_p2());
    let d_ok = check_printed_d(&d).is_ok();
    let b_ok = check_printed_b(&b, &d).is_ok();
    let units = b.member(0).nonzero_count();
    let nonzero_b1 = b.member(1).nonzero_count();
    result(
        2,
        NAME,
        d_ok && b_ok && units == 24,
        json!({
            "d_matches": d_ok,
            "b_matches": b_ok,
            "b0_unit_entries": units,
            "b1_nonzero_entries": nonzero_b1,
            "d_scalars": (0..4).map(|k| d.factored(k).map(|f| f.scalar.to_string())).collect::<Vec<_>>(),
        }),
    )
}

/// Sturmian complexity `n + 1` up to 100, product complexity `(n + 1)^2` up to 10.
pub fn sturmian_complexity() -> CriterionResult {
    const NAME: &str = "Sturmian and product-word complexity";
    let t = Instant::now();
    let policy = WindowPolicy { initial: 1024, cap: 1_000_000 };
    let g = attempt!(3, NAME, parse_source(&format!("sturmian:gamma={GAMMA}")));
    let prof = attempt!(3, NAME, complexity_profile(&g, 100, policy));
    let sturm_ok = prof.entries.iter().all(|e| e.saturated && e.count == e.n + 1);
    let prod = attempt!(3, NAME, parse_source(&format!("product:[sturmian:gamma={GAMMA};sturmian:gamma={BETA}]")));
    let pp = attempt!(3, NAME, complexity_profile(&prod, 10, policy));
    let prod_ok = pp.entries.iter().all(|e| e.saturated && e.count == (e.n + 1) * (e.n + 1));
    let fast = t.elapsed() < Duration::from_secs(60);
    result(
        3,
        NAME,
        sturm_ok && prod_ok && fast,
        json!({
            "sturmian_n_plus_1": sturm_ok,
            "sturmian_max_window": prof.entries.iter().map(|e| e.window).max(),
            "product_square": prod_ok,
            "product_counts": pp.entries.iter().map(|e| e.count).collect::<Vec<_>>(),
            "under_60s": fast,
        }),
    )
}

fn random_int_matrix(rng: &mut ChaCha8Rng) -> Matrix<Integer> {
    let v: Vec<i64> = (0..4).map(|_| rng.gen_range(-5..=5)).collect();
    Matrix::from_i64(2, 2, &v)
}

fn rel_close(a: &BigReal, b: &BigReal, rel: f64) -> bool {
    let scale = a.to_f64().abs().max(b.to_f64().abs());
    (a.to_f64() - b.to_f64()).abs() <= rel * scale + 1e-30
}

/// Mixed-product, norm and spectral-radius laws on 200 random pairs.
pub fn kronecker_laws() -> CriterionResult {
    const NAME: &str = "Kronecker product laws";
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b72_6f6e);
    let prec = digits_to_bits(30);
    let (mut mixed, mut norm, mut rho) = (0, 0, 0);
    for _ in 0..200 {
        let g1 = random_int_matrix(&mut rng);
        let g2 = random_int_matrix(&mut rng);
        let h1 = random_int_matrix(&mut rng);
        let h2 = random_int_matrix(&mut rng);
        let lhs = attempt!(4, NAME, g1.kron(&g2).multiply(&h1.kron(&h2)));
        let rhs = attempt!(4, NAME, g1.multiply(&h1)).kron(&attempt!(4, NAME, g2.multiply(&h2)));
        mixed += usize::from(lhs == rhs);

        let g = Matrix::from_integers(&g1, prec);
        let h = Matrix::from_integers(&g2, prec);
        let gh = g.kron(&h);
        let n_prod = attempt!(4, NAME, op_norm(&g)).mul(&attempt!(4, NAME, op_norm(&h)));
        norm += usize::from(rel_close(&attempt!(4, NAME, op_norm(&gh)), &n_prod, 1e-8));
        let r_prod = attempt!(4, NAME, spectral_radius(&g)).mul(&attempt!(4, NAME, spectral_radius(&h)));
        rho += usize::from(rel_close(&attempt!(4, NAME, spectral_radius(&gh)), &r_prod, 1e-8));
    }
    result(
        4,
        NAME,
        mixed == 200 && norm == 200 && rho == 200,
        json!({ "trials": 200, "mixed_product_exact": mixed, "norm_product": norm, "spectral_radius_product": rho }),
    )
}

/// Golden-ratio bracket, lift root relation, and the Kronecker bracket check.
pub fn jsr_brackets() -> CriterionResult {
    const NAME: &str = "JSR brackets";
    let cfg12 = JsrConfig { max_depth: 12, ..JsrConfig::default() };
    let btv = attempt!(5, NAME, jsr_bounds(&btv_pair(&Param::int(1)), &cfg12));
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let btv_ok = btv.brackets(phi) && btv.gap() < 0.05;

    let a = attempt!(5, NAME, jsr_bounds(&toy_family(2), &cfg12));
    let b = attempt!(5, NAME, jsr_bounds(&jb_pair(&toy_family(2)), &cfg12));
    let lift_ok = a.lower.possibly_le(&b.upper.square()) && b.lower.square().possibly_le(&a.upper);

    let pairs = vec![
        btv_pair(&attempt!(5, NAME, crate::families::alpha_star_param(50))),
        btv_pair(&attempt!(5, NAME, crate::families::alpha_double_star_param(50))),
    ];
    let kc = attempt!(5, NAME, kron_jsr_check(&pairs, &JsrConfig { max_depth: 8, ..JsrConfig::default() }));
    result(
        5,
        NAME,
        btv_ok && lift_ok && kc.intersects,
        json!({
            "btv1": btv.summary(12),
            "btv1_ok": btv_ok,
            "toy_family": a.summary(12),
            "toy_lift": b.summary(12),
            "lift_root_relation": lift_ok,
            "kron_check": kc,
        }),
    )
}

fn random_word(rng: &mut ChaCha8Rng, m: u32, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::new((0..len).map(|_| rng.gen_range(0..m)).collect(), m).expect("symbols in range")
}

fn identities_on(fam: &MatrixFamily, rng: &mut ChaCha8Rng, count: usize, max_len: usize) -> Result<(usize, usize, Vec<String>), crate::lift::LiftError> {
    let (mut feqt, mut enc) = (0, 0);
    let mut failures = Vec::new();
    for _ in 0..count {
        let w = random_word(rng, fam.len() as u32, max_len);
        let f = verify_feqt(fam, &w)?;
        let e = verify_encode_product(fam, &w)?;
        feqt += usize::from(f);
        enc += usize::from(e);
        if !(f && e) {
            failures.push(w.to_string());
        }
    }
    Ok((feqt, enc, failures))
}

/// Block-product identities on random words.
pub fn block_identities() -> CriterionResult {
    const NAME: &str = "block-product identities";
    let mut rng = ChaCha8Rng::seed_from_u64(0x6665_7174);
    let (tf, te, tfail) = attempt!(6, NAME, identities_on(&toy_family(2), &mut rng, 100, 8));
    let (d, _) = attempt!(6, NAME, example_p2());
    let (df, de, dfail) = attempt!(6, NAME, identities_on(&d, &mut rng, 20, 5));
    result(
        6,
        NAME,
        tf == 100 && te == 100 && df == 20 && de == 20,
        json!({
            "toy": { "words": 100, "feqt": tf, "encode_product": te, "failures": tfail },
            "example_p2": { "words": 20, "feqt": df, "encode_product": de, "failures": dfail },
        }),
    )
}

/// Exhaustive automaton-versus-matrix agreement for m = 2, 3.
pub fn support_automaton() -> CriterionResult {
    const NAME: &str = "support automaton vs matrices";
    let mut per_m = Vec::new();
    let mut ok = true;
    for m in 2..=3usize {
        let fam = toy_family(m);
        let (mut checked, mut agree) = (0u64, 0u64);
        let mut mismatch = None;
        for len in 0..=3 * m {
            for w in binary_words(len) {
                let w = attempt!(7, NAME, Word::new(w, 2));
                for j in 0..2 * m - 1 {
                    checked += 1;
                    let num = attempt!(7, NAME, restricted_nonzero(&fam, &w, j));
                    if survives(&w, m, j) == num {
                        agree += 1;
                    } else if mismatch.is_none() {
                        mismatch = Some(format!("{w} from block {j}"));
                    }
                }
            }
        }
        ok &= checked == agree;
        per_m.push(json!({ "m": m, "checked": checked, "agree": agree, "first_mismatch": mismatch }));
    }
    result(7, NAME, ok, Value::Array(per_m))
}

/// One 1 per block for every surviving word, m <= 4, length <= 4m.
pub fn one_per_block_exhaustive() -> CriterionResult {
    const NAME: &str = "one 1 per block (exhaustive)";
    let runs: Vec<_> = (1..=4).map(|m| one_per_block(m, 4 * m)).collect();
    let ok = runs.iter().all(|r| r.counterexample.is_none());
    result(8, NAME, ok, serde_json::to_value(runs).unwrap())
}

/// Complexity transfer through the encoding, and the quadratic sandwich.
pub fn complexity_transfer_check() -> CriterionResult {
    const NAME: &str = "complexity transfer";
    let z = attempt!(9, NAME, parse_source(&format!("product:[sturmian:gamma={GAMMA};sturmian:gamma={BETA}]")));
    let t = attempt!(9, NAME, complexity_transfer(&z, 4, 10, 20_000));
    let m = 4usize;
    // Counts of the encoded prefix reach length 4 * 10 + 1.
    let xs = &t.x_counts;
    let mut sandwich_fail = Vec::new();
    for n in 1..=40usize {
        let lo = (n / m + 1).pow(2);
        let hi = m * (n.div_ceil(m) + 2).pow(2);
        if !(lo <= xs[n] && xs[n] <= hi) {
            sandwich_fail.push(n);
        }
    }
    result(
        9,
        NAME,
        t.holds() && sandwich_fail.is_empty(),
        json!({
            "transfer": t.entries,
            "sandwich_counts": &xs[1..=40],
            "sandwich_failures": sandwich_fail,
        }),
    )
}

/// Growth band, non-extremal flag, and rate stability along the Sturmian word.
pub fn growth_diagnostics() -> CriterionResult {
    const NAME: &str = "growth diagnostics";
    let btv1 = btv_pair(&Param::int(1));
    let prec = digits_to_bits(40);
    let phi = BigReal::from_i64(5, prec).sqrt().add(&BigReal::one()).div_pow2(1);
    let p01 = attempt!(10, NAME, parse_source("periodic:01"));
    let rep = attempt!(10, NAME, growth_report(&btv1, &p01, 2000, &phi));
    let band_ok = rep.band_width() < 2.0;

    let bounds = attempt!(10, NAME, jsr_bounds(&btv1, &JsrConfig { max_depth: 10, ..JsrConfig::default() }));
    let p0 = attempt!(10, NAME, parse_source("periodic:0"));
    let ext = attempt!(10, NAME, extremality_diagnostic(&btv1, &p0, 2000, &bounds));
    let flag_ok = ext.verdict == Verdict::Inconsistent;

    let a = btv_pair(&attempt!(10, NAME, crate::families::alpha_star_param(50)));
    let ab = attempt!(10, NAME, jsr_bounds(&a, &JsrConfig { max_depth: 10, ..JsrConfig::default() }));
    let s = attempt!(10, NAME, parse_source(&format!("sturmian:gamma={GAMMA}")));
    let g = attempt!(10, NAME, growth_report(&a, &s, 5000, &ab.lower));
    let r_end = g.records.last().map_or(f64::NAN, |r| r.r_n);
    let drift = g.window(2500, 5000).map(|r| (r.r_n - r_end).abs()).fold(0.0, f64::max);
    let stable = g.records.len() == 5000 && drift < 1e-2;
    result(
        10,
        NAME,
        band_ok && flag_ok && stable,
        json!({
            "periodic_01_band": rep.band_width(),
            "periodic_0_verdict": ext.verdict.as_str(),
            "periodic_0_limsup": ext.limsup_estimate,
            "alpha_star_bounds": ab.summary(12),
            "sturmian_r_5000": r_end,
            "sturmian_max_drift": drift,
        }),
    )
}

pub type Criterion = fn() -> CriterionResult;

pub const CRITERIA: [(u32, Criterion); 10] = [
    (1, constants),
    (2, explicit_matrices),
    (3, sturmian_complexity),
    (4, kronecker_laws),
    (5, jsr_brackets),
    (6, block_identities),
    (7, support_automaton),
    (8, one_per_block_exhaustive),
    (9, complexity_transfer_check),
    (10, growth_diagnostics),
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: SuiteKind,
    pub passed: bool,
    pub criteria: Vec<CriterionResult>,
}

/// Runs criteria 1 to 10; the full suite adds the determinism check, which
/// reruns the quick suite and compares serialized payloads.
pub fn run_suite(kind: SuiteKind) -> SuiteReport {
    let mut criteria: Vec<CriterionResult> = CRITERIA.iter().map(|(_, f)| f()).collect();
    if kind == SuiteKind::Full {
        let first = serde_json::to_string(&criteria).expect("serializable");
        let again: Vec<CriterionResult> = CRITERIA.iter().map(|(_, f)| f()).collect();
        let second = serde_json::to_string(&again).expect("serializable");
        criteria.push(result(11, "determinism", first == second, json!({ "bytes": first.len(), "identical": first == second })));
    }
    let passed = criteria.iter().all(|c| c.passed);
    SuiteReport { suite: kind, passed, criteria }
}
