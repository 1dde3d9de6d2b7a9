use std::collections::BTreeMap;

use serde_json::json;

use super::config::RunConfig;
use super::report::Payload;
use super::{CliError, Command, FamilyCmd, GrowthArgs, JsrCmd, LiftCmd};
use crate::families::{self, parse_family, FamiliesError};
use crate::jsr::{self, JsrConfig, JsrError};
use crate::lift::{self, LiftError};
use crate::linalg::{format_exact, LinalgError, MatrixFamily};
use crate::precision::{digits_to_bits, BigReal, Constant, PrecisionError};
use crate::suite::{self, SuiteKind};
use crate::words::{self, parse_source, SequenceSource, WindowPolicy, Word, WordsError};

fn compute(e: impl std::fmt::Display) -> CliError {
    CliError::Compute(e.to_string())
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

impl From<JsrError> for CliError {
    fn from(e: JsrError) -> Self {
        compute(e)
    }
}

impl From<LiftError> for CliError {
    fn from(e: LiftError) -> Self {
        compute(e)
    }
}

impl From<WordsError> for CliError {
    fn from(e: WordsError) -> Self {
        compute(e)
    }
}

impl From<PrecisionError> for CliError {
    fn from(e: PrecisionError) -> Self {
        compute(e)
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        compute(e)
    }
}

fn source(spec: &str) -> Result<SequenceSource, CliError> {
    parse_source(spec).map_err(usage)
}

fn family(spec: &str, cfg: &RunConfig) -> Result<MatrixFamily, CliError> {
    parse_family(spec, cfg.digits).map_err(|e| match e {
        FamiliesError::Spec(_)
        | FamiliesError::Io(_)
        | FamiliesError::Linalg(
            LinalgError::Parse(_) | LinalgError::Shape(_) | LinalgError::MissingSymbol(_) | LinalgError::EmptyFamily,
        ) => {
            usage(e)
        }
        other => compute(other),
    })
}

fn jsr_config(cfg: &RunConfig) -> JsrConfig {
    JsrConfig { max_depth: cfg.depth, budget: cfg.budget, digits: cfg.digits }
}

pub(super) fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<Payload, CliError> {
    match cmd {
        Command::Constants { which } => constants(which, cfg),
        Command::Family(FamilyCmd::Build { kind, alpha, alphas, inner, m, from }) => {
            build_family(kind, alpha.as_deref(), alphas.as_deref(), inner.as_deref(), *m, from.as_deref(), cfg)
        }
        Command::Word { spec, length, analyze, recur } => word(spec, *length, *analyze, *recur),
        Command::Complexity { spec, n_max, initial } => complexity(spec, *n_max, *initial, cfg),
        Command::Jsr(JsrCmd::Bounds { family: f }) => bounds(f, cfg),
        Command::Jsr(JsrCmd::Growth(g)) | Command::Growth(g) => growth(g, cfg),
        Command::Jsr(JsrCmd::KronCheck { alphas }) => kron_check(alphas, cfg),
        Command::Jsr(JsrCmd::Extremality { family: f, word_spec, n }) => extremality(f, word_spec, *n, cfg),
        Command::Lift(l) => lift_cmd(l, cfg),
        Command::Verify { suite: s } => verify(s),
    }
}

fn constants(which: &str, cfg: &RunConfig) -> Result<Payload, CliError> {
    let c = Constant::parse(which).ok_or_else(|| usage(format!("unknown constant {which:?}")))?;
    let v = c.compute(cfg.digits)?;
    let value = v.value.to_decimal(cfg.digits);
    let radius = v.value.radius_string();
    // The rounded decimal is within radius + 0.5 ulp, which is below 1e-digits.
    let text = format!("{value} ±1e-{}\n", cfg.digits);
    Ok(Payload::json(
        json!({
            "constant": c.name(),
            "digits": cfg.digits,
            "value": value,
            "error": radius,
            "printed_error": format!("1e-{}", cfg.digits),
            "product_form": v.product.to_decimal(cfg.digits),
            "terms": v.terms,
            "bits": v.bits,
        }),
        text,
    ))
}

fn family_json(role: &str, fam: &MatrixFamily) -> serde_json::Value {
    json!({
        "role": role,
        "tag": fam.tag(),
        "members": fam.len(),
        "dimension": fam.dim(),
        "alphabet_size": fam.len(),
        "matrices": fam.members().iter().map(format_exact).collect::<Vec<_>>(),
    })
}

fn family_text(role: &str, fam: &MatrixFamily) -> String {
    let mut s = String::new();
    for (i, m) in fam.members().iter().enumerate() {
        s.push_str(&format!("# {role}[{i}]\n{}\n", format_exact(m)));
    }
    s
}

fn build_family(
    kind: &str,
    alpha: Option<&str>,
    alphas: Option<&str>,
    inner: Option<&str>,
    m: Option<usize>,
    from: Option<&std::path::Path>,
    cfg: &RunConfig,
) -> Result<Payload, CliError> {
    let need = |v: Option<&str>, flag: &str| v.map(str::to_string).ok_or_else(|| usage(format!("--kind {kind} needs --{flag}")));
    let fams: Vec<(&str, MatrixFamily)> = match kind {
        "btv" => vec![("A", family(&format!("btv:{}", need(alpha, "alpha")?), cfg)?)],
        "kron" => vec![("D", family(&format!("kron:{}", need(alphas, "alphas")?), cfg)?)],
        "jb" => {
            let inner = match (inner, from) {
                (Some(s), _) => family(s, cfg)?,
                (None, Some(p)) => family(&format!("file:{}", p.display()), cfg)?,
                (None, None) => return Err(usage("--kind jb needs --inner or --from")),
            };
            let pair = families::jb_pair(&inner);
            vec![("A", inner), ("B", pair)]
        }
        "example-p2" => {
            let (d, b) = families::example_p2_at(cfg.digits.max(families::EMBED_DIGITS)).map_err(compute)?;
            vec![("D", d), ("B", b)]
        }
        "toy" => vec![("A", families::toy_family(m.ok_or_else(|| usage("--kind toy needs --m"))?))],
        "file" => {
            let p = from.ok_or_else(|| usage("--kind file needs --from"))?;
            vec![("A", family(&format!("file:{}", p.display()), cfg)?)]
        }
        other => return Err(usage(format!("unknown family kind {other:?}"))),
    };
    let mut constants = BTreeMap::new();
    let mut warnings = Vec::new();
    for (_, f) in &fams {
        for (k, v) in f.valuation() {
            constants.insert(k.clone(), v.to_decimal(cfg.digits));
        }
        warnings.extend(f.warnings().iter().cloned());
    }
    warnings.dedup();
    let manifest = json!({
        "kind": kind,
        "families": fams.iter().map(|(r, f)| json!({
            "role": r, "tag": f.tag(), "members": f.len(), "dimension": f.dim(), "alphabet_size": f.len(),
        })).collect::<Vec<_>>(),
        "constants": constants,
    });
    let mut text: String = fams.iter().map(|(r, f)| family_text(r, f)).collect();
    text.push_str(&format!("# manifest\n{}\n", serde_json::to_string(&manifest).unwrap()));
    let body = json!({
        "manifest": manifest,
        "families": fams.iter().map(|(r, f)| family_json(r, f)).collect::<Vec<_>>(),
    });
    Ok(Payload::json(body, text).warn(warnings))
}

fn word(spec: &str, length: usize, analyze: bool, recur: usize) -> Result<Payload, CliError> {
    let src = source(spec)?;
    let w = src.generate_prefix(length)?;
    let mut body = json!({
        "spec": src.to_spec(),
        "length": length,
        "alphabet_size": w.alphabet_size(),
        "word": w.to_string(),
    });
    if analyze {
        if w.alphabet_size() != 2 {
            return Err(usage("--analyze needs a binary sequence"));
        }
        let b = words::is_balanced(&w)?;
        let freq = words::one_frequency(&w)?;
        let rec = if recur >= 1 && 2 * recur <= w.len() { Some(words::recurs_within(&w, recur)?) } else { None };
        body["balanced"] = json!(b.balanced);
        body["unbalanced_witness"] = json!(b.witness.map(|(n, u, v)| json!({ "n": n, "u": u.to_string(), "v": v.to_string() })));
        body["one_frequency"] = json!(freq.to_string());
        body["one_frequency_decimal"] = json!(freq.to_f64());
        body["recurs_within"] = json!({ "n": recur, "holds": rec });
    }
    Ok(Payload::json(body, format!("{w}\n")))
}

fn complexity(spec: &str, n_max: usize, initial: usize, cfg: &RunConfig) -> Result<Payload, CliError> {
    if n_max == 0 || initial == 0 {
        return Err(usage("--n-max and --initial must be positive"));
    }
    let src = source(spec)?;
    let prof = words::complexity_profile(&src, n_max, WindowPolicy { initial, cap: cfg.window_cap })?;
    let mut p = Payload::csv(&prof, prof.to_csv());
    if !prof.all_saturated() {
        p = p.warn(["some counts did not stabilize before the window cap; they are lower bounds".to_string()]);
    }
    Ok(p)
}

fn bounds(spec: &str, cfg: &RunConfig) -> Result<Payload, CliError> {
    let fam = family(spec, cfg)?;
    let b = jsr::jsr_bounds(&fam, &jsr_config(cfg))?;
    let s = b.summary(cfg.digits);
    let text = format!("lower {}\nupper {}\ndepth {}\nwitness {}\n", s.lower, s.upper, s.depth, s.witness);
    let mut warnings: Vec<String> = fam.warnings().to_vec();
    if b.partial {
        warnings.push(format!("budget reached; enumeration stopped at depth {}", b.depth));
    }
    Ok(Payload::json(s, text).warn(warnings))
}

fn parse_rate(s: &str, cfg: &RunConfig) -> Result<BigReal, CliError> {
    BigReal::parse_decimal(s, digits_to_bits(cfg.digits)).map_err(usage)
}

fn growth(g: &GrowthArgs, cfg: &RunConfig) -> Result<Payload, CliError> {
    let fam = family(&g.family, cfg)?;
    let src = source(&g.word_spec)?;
    let n = g.n.unwrap_or(cfg.growth_n);
    let rho = match &g.rho {
        Some(r) => parse_rate(r, cfg)?,
        None => jsr::jsr_bounds(&fam, &jsr_config(cfg))?.lower,
    };
    let rep = jsr::growth_report(&fam, &src, n, &rho)?;
    let mut warnings = Vec::new();
    if let Some(k) = rep.annihilated_at {
        warnings.push(format!("annihilated at n = {k}"));
    }
    Ok(Payload::csv(&rep, rep.to_csv()).warn(warnings))
}

fn kron_check(alphas: &str, cfg: &RunConfig) -> Result<Payload, CliError> {
    let pairs = alphas
        .split(',')
        .map(|a| family(&format!("btv:{a}"), cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let r = jsr::kron_jsr_check(&pairs, &jsr_config(cfg))?;
    let text = format!(
        "family [{}, {}]\nproduct [{}, {}]\nintersects {}\n",
        r.family.lower, r.family.upper, r.product_lower, r.product_upper, r.intersects
    );
    let ok = r.intersects;
    Ok(Payload::json(r, text).check(ok))
}

fn extremality(spec: &str, word_spec: &str, n: Option<u64>, cfg: &RunConfig) -> Result<Payload, CliError> {
    let fam = family(spec, cfg)?;
    let src = source(word_spec)?;
    let b = jsr::jsr_bounds(&fam, &jsr_config(cfg))?;
    let e = jsr::extremality_diagnostic(&fam, &src, n.unwrap_or(cfg.growth_n), &b)?;
    let text = format!("{}\n", e.verdict.as_str());
    Ok(Payload::json(json!({ "bounds": b.summary(cfg.digits), "diagnostic": e }), text))
}

fn lift_cmd(cmd: &LiftCmd, cfg: &RunConfig) -> Result<Payload, CliError> {
    match cmd {
        LiftCmd::Encode { m, word_spec, length } => {
            let x = lift::encode_word(&source(word_spec)?, *m)?.generate_prefix(*length)?;
            Ok(Payload::json(json!({ "m": m, "length": length, "word": x.to_string() }), format!("{x}\n")))
        }
        LiftCmd::Decode { m, word_spec, length, shift, probe } => {
            let x = source(word_spec)?;
            let k = if shift == "auto" {
                lift::normalize_phase(&x, *m as usize, *probe)?
            } else {
                shift.parse::<u64>().map_err(|_| usage(format!("--shift takes an integer or auto, got {shift:?}")))?
            };
            let w = lift::decode_word(&x.shifted(k), *m)?.generate_prefix(*length)?;
            Ok(Payload::json(json!({ "m": m, "shift": k, "length": length, "word": w.to_string() }), format!("{w}\n")))
        }
        LiftCmd::Phase { m, word_spec, probe } => {
            let k = lift::normalize_phase(&source(word_spec)?, *m, *probe)?;
            Ok(Payload::json(json!({ "m": m, "probe": probe, "shift": k }), format!("{k}\n")))
        }
        LiftCmd::Verify { family: f, word, check, block } => {
            let fam = family(f, cfg)?;
            let m = fam.len();
            let (ok, detail) = match check.as_str() {
                "feqt" => {
                    let w = Word::parse(word, m as u32).map_err(usage)?;
                    (lift::verify_feqt(&fam, &w)?, json!({}))
                }
                "encode-product" => {
                    let w = Word::parse(word, m as u32).map_err(usage)?;
                    (lift::verify_encode_product(&fam, &w)?, json!({}))
                }
                "support" => {
                    let w = Word::parse(word, 2).map_err(usage)?;
                    let j = block.unwrap_or(m - 1);
                    if j >= 2 * m - 1 {
                        return Err(usage(format!("--block must be below {}", 2 * m - 1)));
                    }
                    let auto = lift::survives(&w, m, j);
                    let num = lift::restricted_nonzero(&fam, &w, j)?;
                    (auto == num, json!({ "block": j, "automaton": auto, "numeric": num }))
                }
                other => return Err(usage(format!("unknown check {other:?}"))),
            };
            let body = json!({ "family": fam.tag(), "word": word, "check": check, "holds": ok, "detail": detail });
            Ok(Payload::json(body, format!("{}\n", if ok { "holds" } else { "fails" })).check(ok))
        }
    }
}

fn verify(s: &str) -> Result<Payload, CliError> {
    let kind: SuiteKind = s.parse().map_err(usage)?;
    let rep = suite::run_suite(kind);
    let text: String = rep
        .criteria
        .iter()
        .map(|c| format!("{} criterion {:>2}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.id, c.name))
        .collect();
    let ok = rep.passed;
    Ok(Payload::json(rep, text).check(ok))
}
