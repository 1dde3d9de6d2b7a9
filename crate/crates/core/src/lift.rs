//! The correspondence between words over `m` symbols and binary words for
//! the block lift: encoding, decoding, phase normalization, the block
//! support automaton, and exact checks of the block-product identities.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::families::{jb_pair, reduced_generator, BlockLayout, FamiliesError};
use crate::linalg::{Entry, Exact, LinalgError, Matrix, MatrixFamily};
use crate::words::{factor_counts, SequenceSource, Word, WordsError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LiftError {
    #[error(transparent)]
    Words(#[from] WordsError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Families(#[from] FamiliesError),
    #[error("probe length {probe} is shorter than 2m = {}", 2 * .m)]
    ProbeTooShort { probe: usize, m: usize },
    #[error("no surviving phase: every shift k <= {max_shift} annihilates block {block}")]
    NoSurvivingPhase { max_shift: usize, block: usize },
    #[error("alphabet size must be at least 1")]
    ZeroAlphabet,
}

pub fn encode_word(z: &SequenceSource, m: u32) -> Result<SequenceSource, LiftError> {
    Ok(z.clone().encoded(m)?)
}

pub fn decode_word(x: &SequenceSource, m: u32) -> Result<SequenceSource, LiftError> {
    Ok(x.clone().decoded(m)?)
}

/// Finite encoding: block `i` of the output has its single 1 at position
/// `m*i - z_i` (1-based).
pub fn encode_finite(z: &Word, m: u32) -> Result<Word, LiftError> {
    if m == 0 {
        return Err(LiftError::ZeroAlphabet);
    }
    let mut out = Vec::with_capacity(z.len() * m as usize);
    for &s in z.symbols() {
        if s >= m {
            return Err(WordsError::SymbolOutOfRange { symbol: s, size: m }.into());
        }
        let one_at = (m - 1 - s) as usize;
        out.extend((0..m as usize).map(|r| u32::from(r == one_at)));
    }
    Ok(Word::new(out, 2)?)
}

/// Inverse of [`encode_finite`] on complete blocks; a trailing partial
/// block is ignored.
pub fn decode_finite(x: &Word, m: u32) -> Result<Word, LiftError> {
    if m == 0 {
        return Err(LiftError::ZeroAlphabet);
    }
    let mut out = Vec::with_capacity(x.len() / m as usize);
    for (b, block) in x.symbols().chunks_exact(m as usize).enumerate() {
        let ones: Vec<usize> = block.iter().enumerate().filter(|(_, &v)| v == 1).map(|(i, _)| i).collect();
        if ones.len() != 1 {
            return Err(WordsError::Decode { block: b as u64 + 1, ones: ones.len() }.into());
        }
        out.push(m - 1 - ones[0] as u32);
    }
    Ok(Word::new(out, m)?)
}

/// Blocks of the lifted space not yet annihilated, assuming every nonzero
/// block map is injective on what reaches it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockSupport {
    pub m: usize,
    pub alive: BTreeSet<usize>,
}

impl BlockSupport {
    pub fn new(m: usize, start: usize) -> Self {
        let alive = if start < 2 * m - 1 { BTreeSet::from([start]) } else { BTreeSet::new() };
        BlockSupport { m, alive }
    }

    pub fn full(m: usize) -> Self {
        BlockSupport { m, alive: (0..2 * m - 1).collect() }
    }

    pub fn is_empty(&self) -> bool {
        self.alive.is_empty()
    }
}

/// `0`: shift down, dropping block 0. `1`: block `j < m` moves to `j + m - 1`,
/// blocks `>= m` are killed.
pub fn block_step(s: &BlockSupport, symbol: u32) -> BlockSupport {
    let m = s.m;
    let alive = match symbol {
        0 => s.alive.iter().filter(|&&j| j >= 1).map(|&j| j - 1).collect(),
        _ => s.alive.iter().filter(|&&j| j < m).map(|&j| j + m - 1).collect(),
    };
    BlockSupport { m, alive }
}

pub fn survives(x: &Word, m: usize, start: usize) -> bool {
    let mut s = BlockSupport::new(m, start);
    for &c in x.symbols() {
        s = block_step(&s, c);
        if s.is_empty() {
            return false;
        }
    }
    !s.is_empty()
}

/// Smallest `k <= 2m - 2` such that the length-`probe` prefix of `x`
/// shifted by `k` keeps block `m - 1` alive.
pub fn normalize_phase(x: &SequenceSource, m: usize, probe: usize) -> Result<u64, LiftError> {
    if m == 0 {
        return Err(LiftError::ZeroAlphabet);
    }
    if probe < 2 * m {
        return Err(LiftError::ProbeTooShort { probe, m });
    }
    let max_shift = 2 * m - 2;
    let window = x.fill(1, probe + max_shift)?;
    for k in 0..=max_shift {
        let w = Word::new(window[k..k + probe].to_vec(), 2)?;
        if survives(&w, m, m - 1) {
            return Ok(k as u64);
        }
    }
    Err(LiftError::NoSurvivingPhase { max_shift, block: m - 1 })
}

fn block_diag(blocks: &[Matrix<Exact>], d: usize) -> Matrix<Exact> {
    let n = blocks.len() * d;
    let mut out = Matrix::zeros(n, n);
    for (i, b) in blocks.iter().enumerate() {
        out.set_block(i, i, b);
    }
    out
}

/// `A_{w_n + s} ... A_{w_1 + s}` with `A_j = 0` outside `0..m`.
fn shifted_product(fam: &MatrixFamily, w: &[u32], s: i64) -> Result<Matrix<Exact>, LiftError> {
    let d = fam.dim();
    let m = fam.len() as i64;
    let mut p = Matrix::<Exact>::identity(d);
    for &x in w {
        let j = x as i64 + s;
        if !(0..m).contains(&j) {
            return Ok(Matrix::zeros(d, d));
        }
        p = fam.member(j as usize).multiply(&p)?;
    }
    Ok(p)
}

fn reduced_product(pair: &MatrixFamily, m: usize, w: &[u32]) -> Result<Matrix<Exact>, LiftError> {
    let gens = (0..m).map(|j| reduced_generator(pair, m, j)).collect::<Result<Vec<_>, _>>()?;
    let mut p = Matrix::<Exact>::identity(pair.dim());
    for &x in w {
        p = gens[x as usize].multiply(&p)?;
    }
    Ok(p)
}

/// Exact check that `D_{w_n} ... D_{w_1}` is block diagonal with block `i`
/// equal to `A_{w_n + i - m + 1} ... A_{w_1 + i - m + 1}`.
pub fn verify_feqt(fam: &MatrixFamily, w: &Word) -> Result<bool, LiftError> {
    fam.check_word(w)?;
    let m = fam.len();
    let pair = jb_pair(fam);
    let left = reduced_product(&pair, m, w.symbols())?;
    let blocks = (0..2 * m - 1)
        .map(|i| shifted_product(fam, w.symbols(), i as i64 - m as i64 + 1))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(left == block_diag(&blocks, fam.dim()))
}

/// Exact check of `B_{x_{mn}} ... B_{x_1} = D_{z_n} ... D_{z_1}` for
/// `x = encode(z)`.
pub fn verify_encode_product(fam: &MatrixFamily, z: &Word) -> Result<bool, LiftError> {
    fam.check_word(z)?;
    let m = fam.len();
    let pair = jb_pair(fam);
    let x = encode_finite(z, m as u32)?;
    let left = pair.product_along(&x)?;
    let right = reduced_product(&pair, m, z.symbols())?;
    Ok(left == right)
}

/// Whether `B_{x_n} ... B_{x_1}` is nonzero on block `start`, computed from
/// the actual matrices of the lift of `fam`.
pub fn restricted_nonzero(fam: &MatrixFamily, x: &Word, start: usize) -> Result<bool, LiftError> {
    let pair = jb_pair(fam);
    let p = pair.product_along(x)?;
    let layout = BlockLayout { m: fam.len(), d: fam.dim() };
    let cols = layout.range(start);
    Ok((0..p.rows()).any(|i| cols.clone().any(|j| !Entry::is_zero(p.get(i, j)))))
}

/// All binary words of length `len`, as symbol vectors.
pub fn binary_words(len: usize) -> impl Iterator<Item = Vec<u32>> {
    (0..1u64 << len).map(move |bits| (0..len).map(|i| ((bits >> (len - 1 - i)) & 1) as u32).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OnePerBlock {
    pub m: usize,
    pub max_len: usize,
    pub surviving: u64,
    pub counterexample: Option<String>,
}

/// Every binary word of length `<= max_len` that keeps block `m - 1` alive
/// has exactly one 1 in each complete `m`-block.
pub fn one_per_block(m: usize, max_len: usize) -> OnePerBlock {
    let mut surviving = 0;
    for len in 0..=max_len {
        for w in binary_words(len) {
            let word = Word::new(w, 2).expect("binary");
            // Supports only shrink to empty, so surviving the whole word
            // means surviving every prefix.
            if !survives(&word, m, m - 1) {
                continue;
            }
            surviving += 1;
            let bad = word.symbols().chunks_exact(m).any(|b| b.iter().filter(|&&v| v == 1).count() != 1);
            if bad {
                return OnePerBlock { m, max_len, surviving, counterexample: Some(word.to_string()) };
            }
        }
    }
    OnePerBlock { m, max_len, surviving, counterexample: None }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TransferEntry {
    pub n: usize,
    pub p_z_n: usize,
    pub p_z_n1: usize,
    pub p_x_mn: usize,
    pub p_x_mn1: usize,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transfer {
    pub m: u32,
    pub z_len: usize,
    pub entries: Vec<TransferEntry>,
    /// Factor counts of the encoded prefix, index = factor length.
    pub x_counts: Vec<usize>,
}

impl Transfer {
    pub fn holds(&self) -> bool {
        self.entries.iter().all(|e| e.lower_ok && e.upper_ok)
    }
}

/// Checks `P(x, mn) >= P(z, n)` and `P(x, mn + 1) <= m P(z, n + 1)` for
/// `x = encode(z)`, counting factors of the first `z_len` symbols of `z`
/// and of their encoding, so both sides see matched windows.
pub fn complexity_transfer(z: &SequenceSource, m: u32, n_max: usize, z_len: usize) -> Result<Transfer, LiftError> {
    let zw = z.generate_prefix(z_len)?;
    let x = encode_finite(&zw, m)?;
    let mu = m as usize;
    let zc = factor_counts(zw.symbols(), n_max + 1);
    let xc = factor_counts(x.symbols(), mu * n_max + 1);
    let entries = (1..=n_max)
        .map(|n| {
            let e = TransferEntry {
                n,
                p_z_n: zc[n],
                p_z_n1: zc[n + 1],
                p_x_mn: xc[mu * n],
                p_x_mn1: xc[mu * n + 1],
                lower_ok: false,
                upper_ok: false,
            };
            TransferEntry { lower_ok: e.p_x_mn >= e.p_z_n, upper_ok: e.p_x_mn1 <= mu * e.p_z_n1, ..e }
        })
        .collect();
    Ok(Transfer { m, z_len, entries, x_counts: xc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::toy_family;
    use crate::words::parse_source;

    fn w2(s: &str) -> Word {
        Word::from_digits(s, 2).unwrap()
    }

    #[test]
    fn encode_examples() {
        let z = Word::from_digits("010", 2).unwrap();
        assert_eq!(encode_finite(&z, 2).unwrap().to_string(), "011001");
        assert_eq!(encode_finite(&Word::from_digits("000", 1).unwrap(), 1).unwrap().to_string(), "111");
        assert_eq!(encode_finite(&Word::from_digits("20", 3).unwrap(), 3).unwrap().to_string(), "100001");
        let src = parse_source("periodic:010").unwrap();
        let x = encode_word(&src, 2).unwrap().generate_prefix(6).unwrap();
        assert_eq!(x.to_string(), "011001");
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode_finite(&w2("0110"), 2).unwrap().to_string(), "01");
        assert_eq!(decode_finite(&w2("11"), 2), Err(WordsError::Decode { block: 1, ones: 2 }.into()));
        let x = parse_source("periodic:11").unwrap();
        assert!(decode_word(&x, 2).unwrap().generate_prefix(2).is_err());
    }

    #[test]
    fn block_steps() {
        let s = BlockSupport::new(2, 1);
        let a = block_step(&s, 1);
        assert_eq!(a.alive, BTreeSet::from([2]));
        assert!(block_step(&a, 1).is_empty());
        let b = block_step(&s, 0);
        assert_eq!(b.alive, BTreeSet::from([0]));
        assert_eq!(block_step(&b, 1).alive, BTreeSet::from([1]));
        assert_eq!(block_step(&BlockSupport::full(2), 0).alive, BTreeSet::from([0, 1]));
    }

    #[test]
    fn survival() {
        assert!(survives(&w2("0110"), 2, 1));
        assert!(!survives(&w2("11"), 2, 1));
        assert!(!survives(&w2("00"), 2, 1));
        assert!(survives(&w2(""), 2, 1));
    }

    #[test]
    fn phases() {
        let x = parse_source("prefix:00,pad=cycle(10)").unwrap();
        assert_eq!(x.generate_prefix(6).unwrap().to_string(), "001010");
        assert_eq!(normalize_phase(&x, 2, 16).unwrap(), 1);
        assert_eq!(normalize_phase(&parse_source("periodic:01").unwrap(), 2, 16).unwrap(), 0);
        assert_eq!(
            normalize_phase(&parse_source("periodic:1").unwrap(), 2, 16),
            Err(LiftError::NoSurvivingPhase { max_shift: 2, block: 1 })
        );
        assert!(matches!(normalize_phase(&x, 2, 3), Err(LiftError::ProbeTooShort { .. })));
    }

    #[test]
    fn block_identities_on_toy() {
        let fam = toy_family(2);
        for s in ["", "0", "01", "10", "0110", "1101"] {
            let w = w2(s);
            assert!(verify_feqt(&fam, &w).unwrap(), "{s}");
            assert!(verify_encode_product(&fam, &w).unwrap(), "{s}");
        }
        let fam3 = toy_family(3);
        let w = Word::from_digits("2102", 3).unwrap();
        assert!(verify_feqt(&fam3, &w).unwrap());
        assert!(verify_encode_product(&fam3, &w).unwrap());
    }

    #[test]
    fn automaton_agrees_with_matrices() {
        for m in 2..=3 {
            let fam = toy_family(m);
            for len in 0..=3 * m {
                for w in binary_words(len) {
                    let w = Word::new(w, 2).unwrap();
                    for j in 0..2 * m - 1 {
                        assert_eq!(survives(&w, m, j), restricted_nonzero(&fam, &w, j).unwrap(), "{w} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn one_per_block_small() {
        for m in 1..=3 {
            let r = one_per_block(m, 4 * m);
            assert_eq!(r.counterexample, None);
            assert!(r.surviving > 0);
        }
    }

    #[test]
    fn transfer_on_sturmian() {
        let z = parse_source("sturmian:gamma=(3-sqrt5)/2").unwrap();
        let t = complexity_transfer(&z, 2, 8, 2000).unwrap();
        assert!(t.holds());
        assert_eq!(t.entries[0].p_z_n, 2);
    }
}
