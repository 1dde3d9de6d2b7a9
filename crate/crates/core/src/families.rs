//! Constructors for the concrete families: the two-parameter-free BTV pair,
//! Kronecker families over several BTV pairs, the block lift of an
//! m-member family to a pair, and its reduced generators.

use std::path::Path;

use rug::{Integer, Rational};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{
    parse_decimal_rational, parse_matrix, Entry, Exact, LinalgError, Matrix, MatrixFamily, Valuation,
};
use crate::precision::{alpha_double_star, alpha_star, digits_to_bits, BigReal, PrecisionError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamiliesError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Precision(#[from] PrecisionError),
    #[error("bad family spec: {0}")]
    Spec(String),
    #[error("generator index {j} out of range for m = {m}")]
    IndexOutOfRange { j: usize, m: usize },
    #[error("constructed pattern differs from the reference: {0}")]
    PatternMismatch(String),
    #[error("{0}")]
    Io(String),
}

/// A family parameter: an exact rational or a named real constant.
#[derive(Clone, Debug)]
pub enum Param {
    Rational(Rational),
    Named { name: String, value: BigReal },
}

impl Param {
    pub fn int(v: i64) -> Self {
        Param::Rational(Rational::from(v))
    }

    fn entry(&self) -> Exact {
        match self {
            Param::Rational(q) => Exact::rational(q.clone()),
            Param::Named { name, .. } => Exact::var(name),
        }
    }

    fn valuation(&self) -> Valuation {
        let mut v = Valuation::new();
        if let Param::Named { name, value } = self {
            v.insert(name.clone(), value.clone());
        }
        v
    }

    fn approx(&self) -> f64 {
        match self {
            Param::Rational(q) => q.to_f64(),
            Param::Named { value, .. } => value.to_f64(),
        }
    }

    fn label(&self) -> String {
        match self {
            Param::Rational(q) => q.to_string(),
            Param::Named { name, .. } => name.clone(),
        }
    }
}

fn int_matrix(rows: usize, vals: &[i64]) -> Matrix<Exact> {
    Matrix::from_i64(rows, vals.len() / rows, vals).map(|v| Exact::rational(Rational::from(v)))
}

/// `[[1,1],[0,1]]`.
pub fn btv_a0() -> Matrix<Exact> {
    int_matrix(2, &[1, 1, 0, 1])
}

/// Pattern of the second BTV member, `[[1,0],[1,1]]`.
pub fn btv_a1_pattern() -> Matrix<Exact> {
    int_matrix(2, &[1, 0, 1, 1])
}

/// `{[[1,1],[0,1]], alpha [[1,0],[1,1]]}`; a parameter outside [0, 1] is
/// accepted with a warning.
pub fn btv_pair(alpha: &Param) -> MatrixFamily {
    let a1 = btv_a1_pattern().scale(&alpha.entry());
    let fam = MatrixFamily::new(vec![btv_a0(), a1], alpha.valuation(), format!("btv({})", alpha.label()))
        .expect("BTV members are 2x2 and valued");
    let a = alpha.approx();
    if !(0.0..=1.0).contains(&a) {
        fam.with_warning(format!("alpha = {a} lies outside [0, 1]"))
    } else {
        fam
    }
}

/// Kronecker family: member with index `sum_j x_j * prod_{k<j} |F_k|`
/// (component 1 least significant) is `F_1[x_1] (x) ... (x) F_p[x_p]`.
pub fn kron_families(fams: &[MatrixFamily]) -> Result<MatrixFamily, FamiliesError> {
    if fams.is_empty() {
        return Err(FamiliesError::Spec("Kronecker family needs at least one component".into()));
    }
    let total: usize = fams.iter().map(MatrixFamily::len).product();
    let mut members = Vec::with_capacity(total);
    for idx in 0..total {
        let mut rest = idx;
        let mut acc: Option<Matrix<Exact>> = None;
        for f in fams {
            let x = rest % f.len();
            rest /= f.len();
            acc = Some(match acc {
                None => f.member(x).clone(),
                Some(a) => a.kron(f.member(x)),
            });
        }
        members.push(acc.unwrap());
    }
    let mut val = Valuation::new();
    let mut warnings = Vec::new();
    for f in fams {
        val.extend(f.valuation().iter().map(|(k, v)| (k.clone(), v.clone())));
        warnings.extend(f.warnings().iter().cloned());
    }
    let tags: Vec<&str> = fams.iter().map(MatrixFamily::tag).collect();
    let mut fam = MatrixFamily::new(members, val, format!("kron[{}]", tags.join(",")))?;
    for w in warnings {
        fam = fam.with_warning(w);
    }
    Ok(fam)
}

pub fn kron_family(alphas: &[Param]) -> Result<MatrixFamily, FamiliesError> {
    let pairs: Vec<MatrixFamily> = alphas.iter().map(btv_pair).collect();
    kron_families(&pairs)
}

/// Block bookkeeping for the lift: `2m - 1` blocks of size `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BlockLayout {
    pub m: usize,
    pub d: usize,
}

impl BlockLayout {
    pub fn blocks(&self) -> usize {
        2 * self.m - 1
    }

    pub fn dim(&self) -> usize {
        self.blocks() * self.d
    }

    pub fn range(&self, block: usize) -> std::ops::Range<usize> {
        block * self.d..(block + 1) * self.d
    }
}

/// The lift `{B_0, B_1}` of an m-member family: `B_0` moves block `i` to
/// block `i - 1` (block 0 is dropped), `B_1` sends block `i < m` through
/// `A_i` into block `m - 1 + i` and kills blocks `>= m`.
pub fn jb_pair(fam: &MatrixFamily) -> MatrixFamily {
    let layout = BlockLayout { m: fam.len(), d: fam.dim() };
    let n = layout.dim();
    let d = layout.d;
    let mut b0 = Matrix::<Exact>::zeros(n, n);
    for i in 1..layout.blocks() {
        b0.set_block(i - 1, i, &Matrix::identity(d));
    }
    let mut b1 = Matrix::<Exact>::zeros(n, n);
    for (i, a) in fam.members().iter().enumerate() {
        b1.set_block(layout.m - 1 + i, i, a);
    }
    let mut pair = MatrixFamily::new(vec![b0, b1], fam.valuation().clone(), format!("jb({})", fam.tag()))
        .expect("lift members share one dimension");
    for w in fam.warnings() {
        pair = pair.with_warning(w.clone());
    }
    pair
}

/// `B_0^j B_1 B_0^(m-1-j)`.
pub fn reduced_generator(pair: &MatrixFamily, m: usize, j: usize) -> Result<Matrix<Exact>, FamiliesError> {
    if j >= m || pair.len() != 2 {
        return Err(FamiliesError::IndexOutOfRange { j, m });
    }
    let b0 = pair.member(0);
    let b1 = pair.member(1);
    let right = b0.pow((m - 1 - j) as u32)?;
    let left = b0.pow(j as u32)?;
    Ok(left.multiply(&b1.multiply(&right)?)?)
}

/// The first `m` primes as `1 x 1` matrices; `toy_family(2) = {(2), (3)}`.
pub fn toy_family(m: usize) -> MatrixFamily {
    let mut primes = Vec::new();
    let mut k = 2i64;
    while primes.len() < m {
        if (2..k).take_while(|p| p * p <= k).all(|p| k % p != 0) {
            primes.push(k);
        }
        k += 1;
    }
    scalar_family(&primes.iter().map(|&p| Rational::from(p)).collect::<Vec<_>>())
}

pub fn scalar_family(vals: &[Rational]) -> MatrixFamily {
    let members = vals.iter().map(|q| Matrix::new(1, 1, vec![Exact::rational(q.clone())]).unwrap()).collect();
    let labels: Vec<String> = vals.iter().map(ToString::to_string).collect();
    MatrixFamily::new(members, Valuation::new(), format!("scalars({})", labels.join(",")))
        .expect("scalars are 1x1")
}

pub const ALPHA_STAR: &str = "alpha_star";
pub const ALPHA_DOUBLE_STAR: &str = "alpha_double_star";
pub const EMBED_DIGITS: u32 = 50;

pub fn alpha_star_param(digits: u32) -> Result<Param, FamiliesError> {
    Ok(Param::Named { name: ALPHA_STAR.into(), value: alpha_star(digits)? })
}

pub fn alpha_double_star_param(digits: u32) -> Result<Param, FamiliesError> {
    Ok(Param::Named { name: ALPHA_DOUBLE_STAR.into(), value: alpha_double_star(digits)? })
}

/// Reference patterns `(scalar, rows)` for the explicit four-member family.
pub fn printed_d() -> [(&'static str, [i64; 16]); 4] {
    [
        ("1", [1, 1, 1, 1, 0, 1, 0, 1, 0, 0, 1, 1, 0, 0, 0, 1]),
        (ALPHA_STAR, [1, 1, 0, 0, 0, 1, 0, 0, 1, 1, 1, 1, 0, 1, 0, 1]),
        (ALPHA_DOUBLE_STAR, [1, 0, 1, 0, 1, 1, 1, 1, 0, 0, 1, 0, 0, 0, 1, 1]),
        ("alpha_double_star*alpha_star", [1, 0, 0, 0, 1, 1, 0, 0, 1, 0, 1, 0, 1, 1, 1, 1]),
    ]
}

/// Checks a four-member family against [`printed_d`] exactly.
pub fn check_printed_d(d: &MatrixFamily) -> Result<(), FamiliesError> {
    if d.len() != 4 || d.dim() != 4 {
        return Err(FamiliesError::PatternMismatch(format!("{} members of dimension {}", d.len(), d.dim())));
    }
    for (k, (scalar, rows)) in printed_d().iter().enumerate() {
        let want = int_matrix(4, rows).scale(&scalar.parse::<Exact>().unwrap());
        if *d.member(k) != want {
            return Err(FamiliesError::PatternMismatch(format!("member {k}")));
        }
    }
    Ok(())
}

/// Checks the 28 x 28 lift of the four-member family block by block.
pub fn check_printed_b(b: &MatrixFamily, d: &MatrixFamily) -> Result<(), FamiliesError> {
    if b.len() != 2 || b.dim() != 28 {
        return Err(FamiliesError::PatternMismatch("lift must be a pair of 28 x 28 matrices".into()));
    }
    let id = Matrix::<Exact>::identity(4);
    let zero = Matrix::<Exact>::zeros(4, 4);
    for bi in 0..7 {
        for bj in 0..7 {
            let want0 = if bj == bi + 1 { &id } else { &zero };
            if b.member(0).block(bi, bj, 4) != *want0 {
                return Err(FamiliesError::PatternMismatch(format!("B0 block ({bi},{bj})")));
            }
            let want1 = if bi >= 3 && bj == bi - 3 { d.member(bj) } else { &zero };
            if b.member(1).block(bi, bj, 4) != *want1 {
                return Err(FamiliesError::PatternMismatch(format!("B1 block ({bi},{bj})")));
            }
        }
    }
    Ok(())
}

/// The explicit instance: the Kronecker family over the two BTV pairs at
/// alpha_star and alpha_double_star (embedded at 50 digits), and its lift.
pub fn example_p2() -> Result<(MatrixFamily, MatrixFamily), FamiliesError> {
    example_p2_at(EMBED_DIGITS)
}

pub fn example_p2_at(digits: u32) -> Result<(MatrixFamily, MatrixFamily), FamiliesError> {
    let d = kron_family(&[alpha_star_param(digits)?, alpha_double_star_param(digits)?])?;
    check_printed_d(&d)?;
    let b = jb_pair(&d);
    check_printed_b(&b, &d)?;
    Ok((d, b))
}

fn parse_param(s: &str, digits: u32) -> Result<Param, FamiliesError> {
    let s = s.trim();
    match s {
        "alpha-star" | "alpha_star" | "alpha*" => return alpha_star_param(digits),
        "alpha-double-star" | "alpha_double_star" | "alpha**" => return alpha_double_star_param(digits),
        _ => {}
    }
    let neg = s.starts_with('-');
    let body = s.trim_start_matches('-');
    let q = if let Some((a, b)) = body.split_once('/') {
        let a: Integer = a.trim().parse().map_err(|_| FamiliesError::Spec(format!("bad parameter {s:?}")))?;
        let b: Integer = b.trim().parse().map_err(|_| FamiliesError::Spec(format!("bad parameter {s:?}")))?;
        if b == 0 {
            return Err(FamiliesError::Spec("zero denominator".into()));
        }
        Rational::from((a, b))
    } else {
        parse_decimal_rational(body).ok_or_else(|| FamiliesError::Spec(format!("bad parameter {s:?}")))?
    };
    Ok(Param::Rational(if neg { -q } else { q }))
}

/// Reads a family file: one matrix per line in the text format, `#`
/// comments, and `name = decimal` lines valuing named constants.
pub fn family_from_text(text: &str, digits: u32, tag: &str) -> Result<MatrixFamily, FamiliesError> {
    let prec = digits_to_bits(digits);
    let mut val = Valuation::new();
    let mut members = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if let Some((name, value)) = line.split_once('=') {
            let name = name.trim();
            let v = match parse_param(value, digits)? {
                Param::Rational(q) => BigReal::from_rational(&q, prec),
                Param::Named { value, .. } => value,
            };
            val.insert(name.to_string(), v);
        } else {
            members.push(parse_matrix(line)?);
        }
    }
    Ok(MatrixFamily::new(members, val, tag)?)
}

/// Builds a family from a spec such as `btv:1`, `btv:alpha-star`,
/// `kron:alpha-star,alpha-double-star`, `jb:toy:2`, `example-p2`,
/// `example-p2-jb`, `toy:2`, `scalars:2,3/2` or `file:path`.
pub fn parse_family(spec: &str, digits: u32) -> Result<MatrixFamily, FamiliesError> {
    let spec = spec.trim();
    let (kind, body) = spec.split_once(':').unwrap_or((spec, ""));
    match kind {
        "btv" => Ok(btv_pair(&parse_param(body, digits)?)),
        "kron" => {
            let params = body.split(',').map(|p| parse_param(p, digits)).collect::<Result<Vec<_>, _>>()?;
            kron_family(&params)
        }
        "jb" => Ok(jb_pair(&parse_family(body, digits)?)),
        "example-p2" => Ok(example_p2_at(digits.max(EMBED_DIGITS))?.0),
        "example-p2-jb" => Ok(example_p2_at(digits.max(EMBED_DIGITS))?.1),
        "toy" => {
            let m: usize = body.trim().parse().map_err(|_| FamiliesError::Spec(format!("bad toy size {body:?}")))?;
            if m == 0 {
                return Err(FamiliesError::Spec("toy family needs m >= 1".into()));
            }
            Ok(toy_family(m))
        }
        "scalars" => {
            let vals = body
                .split(',')
                .map(|p| match parse_param(p, digits)? {
                    Param::Rational(q) => Ok(q),
                    Param::Named { .. } => Err(FamiliesError::Spec("scalars must be rational".into())),
                })
                .collect::<Result<Vec<_>, FamiliesError>>()?;
            Ok(scalar_family(&vals))
        }
        "file" => {
            let path = Path::new(body.trim());
            let text = std::fs::read_to_string(path).map_err(|e| FamiliesError::Io(format!("{}: {e}", path.display())))?;
            family_from_text(&text, digits, &format!("file({})", path.display()))
        }
        other => Err(FamiliesError::Spec(format!("unknown family kind {other:?}"))),
    }
}

/// `c * fam` for a rational `c`.
pub fn scale_family(fam: &MatrixFamily, c: &Rational) -> Result<MatrixFamily, FamiliesError> {
    Ok(fam.scaled(&Exact::rational(c.clone()), Valuation::new())?)
}

/// Restriction check used by tests: `D_j` acts on block `m - 1` as `A_j`.
pub fn restricted_to_middle_block(gen: &Matrix<Exact>, layout: BlockLayout) -> Matrix<Exact> {
    gen.block(layout.m - 1, layout.m - 1, layout.d)
}

pub fn is_exact_zero(m: &Matrix<Exact>) -> bool {
    m.data().iter().all(Entry::is_zero)
}
