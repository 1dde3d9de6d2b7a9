use std::fmt;

use rug::Integer;
use serde::{Deserialize, Serialize};

use super::quadratic::{floor_form, QuadraticIrrational};
use super::{Symbol, Word, WordsError};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `x_i = floor((i+1) gamma + z) - floor(i gamma + z)`
    #[default]
    Floor,
    /// `x_i = ceil((i+1) gamma + z) - ceil(i gamma + z)`
    Ceiling,
}

/// Rotation coding by an irrational `gamma` in (0, 1) with offset `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SturmianSpec {
    gamma: QuadraticIrrational,
    z: QuadraticIrrational,
    variant: Variant,
    coder: Coder,
}

/// `k -> floor((k a + az + (k b + bz) sqrt d) / c)` with a machine-word path.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Coder {
    a: Integer,
    b: Integer,
    az: Integer,
    bz: Integer,
    d: Integer,
    c: Integer,
    small: Option<[i128; 6]>,
}

fn isqrt_u128(n: u128) -> u128 {
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

impl Coder {
    fn new(gamma: &QuadraticIrrational, z: &QuadraticIrrational, sign: i64) -> Self {
        let (ag, bg, cg) = gamma.integer_form();
        let (az, bz, cz) = z.integer_form();
        let c = Integer::from(cg.lcm_ref(&cz));
        let s = Integer::from(sign);
        let scale = |v: Integer, den: &Integer| Integer::from(&c / den) * v * &s;
        let a = scale(ag, &cg);
        let b = scale(bg, &cg);
        let az = scale(az, &cz);
        let bz = scale(bz, &cz);
        let d = if gamma.is_rational() { z.radicand().clone() } else { gamma.radicand().clone() };
        let small = [&a, &b, &az, &bz, &d, &c]
            .iter()
            .map(|v| v.to_i64().map(i128::from))
            .collect::<Option<Vec<_>>>()
            .map(|v| [v[0], v[1], v[2], v[3], v[4], v[5]]);
        Coder { a, b, az, bz, d, c, small }
    }

    fn floor_at(&self, k: u64) -> Integer {
        if let Some([a, b, az, bz, d, c]) = self.small {
            let k = k as i128;
            if let (Some(na), Some(nb)) = (k.checked_mul(a).and_then(|x| x.checked_add(az)), k.checked_mul(b).and_then(|x| x.checked_add(bz))) {
                let sq = (nb.unsigned_abs()).checked_mul(nb.unsigned_abs()).and_then(|x| x.checked_mul(d as u128));
                if let Some(sq) = sq.filter(|&s| s < (1u128 << 120)) {
                    let r = isqrt_u128(sq) as i128;
                    let fb = if nb == 0 { 0 } else if nb > 0 { r } else { -r - 1 };
                    return Integer::from((na + fb).div_euclid(c));
                }
            }
        }
        let k = Integer::from(k);
        let na = Integer::from(&k * &self.a) + &self.az;
        let nb = Integer::from(&k * &self.b) + &self.bz;
        floor_form(&na, &nb, &self.d, &self.c)
    }
}

impl SturmianSpec {
    pub fn new(gamma: QuadraticIrrational, z: QuadraticIrrational, variant: Variant) -> Result<Self, WordsError> {
        if gamma.is_rational() {
            return Err(WordsError::RationalGamma);
        }
        if !gamma.is_positive() || gamma.floor() != 0 {
            return Err(WordsError::GammaOutOfRange(gamma.to_string()));
        }
        if !z.is_rational() && z.radicand() != gamma.radicand() {
            return Err(WordsError::Quadratic(format!(
                "offset radicand {} differs from rotation radicand {}",
                z.radicand(),
                gamma.radicand()
            )));
        }
        let z = z.fract();
        let sign = match variant {
            Variant::Floor => 1,
            Variant::Ceiling => -1,
        };
        let coder = Coder::new(&gamma, &z, sign);
        Ok(SturmianSpec { gamma, z, variant, coder })
    }

    /// Offset 0, floor variant.
    pub fn with_gamma(gamma: QuadraticIrrational) -> Result<Self, WordsError> {
        Self::new(gamma, QuadraticIrrational::from_int(0), Variant::Floor)
    }

    pub fn gamma(&self) -> &QuadraticIrrational {
        &self.gamma
    }

    pub fn offset(&self) -> &QuadraticIrrational {
        &self.z
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// `floor(k gamma + z)`, or `ceil` for the ceiling variant.
    fn cut(&self, k: u64) -> Integer {
        let f = self.coder.floor_at(k);
        match self.variant {
            Variant::Floor => f,
            Variant::Ceiling => -f,
        }
    }

    pub fn symbol_at(&self, i: u64) -> Result<Symbol, WordsError> {
        if i == 0 {
            return Err(WordsError::IndexZero);
        }
        let v = self.cut(i + 1) - self.cut(i) ;
        Symbol::new(v.to_u32().unwrap_or(u32::MAX), 2)
    }

    fn fill(&self, from: u64, count: usize) -> Vec<u32> {
        let mut out = Vec::with_capacity(count);
        let mut prev = self.cut(from);
        for k in 0..count as u64 {
            let next = self.cut(from + k + 1);
            out.push(if next != prev { 1 } else { 0 });
            prev = next;
        }
        out
    }
}

/// Continuation rule after an explicit prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Padding {
    Constant(u32),
    Periodic(Word),
}

/// Lazily evaluated infinite sequence indexed from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceSource {
    Sturmian(SturmianSpec),
    Periodic(Word),
    PrefixExtended { prefix: Word, pad: Padding },
    /// Binary children combined letterwise; component `j` (from 1) carries
    /// weight `2^(j-1)`.
    Product(Vec<SequenceSource>),
    Shifted(Box<SequenceSource>, u64),
    Encoded(Box<SequenceSource>, u32),
    Decoded(Box<SequenceSource>, u32),
}

impl SequenceSource {
    pub fn periodic(w: Word) -> Result<Self, WordsError> {
        if w.is_empty() {
            return Err(WordsError::EmptyWord);
        }
        Ok(SequenceSource::Periodic(w))
    }

    pub fn periodic_digits(s: &str) -> Result<Self, WordsError> {
        let w = Word::from_digits(s, 2)
            .or_else(|_| Word::from_digits(s, 10))?;
        let m = w.symbols().iter().max().map_or(2, |&x| (x + 1).max(2));
        Self::periodic(Word::new(w.into_symbols(), m)?)
    }

    pub fn prefix_extended(prefix: Word, pad: Padding) -> Result<Self, WordsError> {
        if let Padding::Periodic(w) = &pad {
            if w.is_empty() {
                return Err(WordsError::EmptyWord);
            }
        }
        Ok(SequenceSource::PrefixExtended { prefix, pad })
    }

    pub fn product(children: Vec<SequenceSource>) -> Result<Self, WordsError> {
        if children.is_empty() || children.len() > 16 {
            return Err(WordsError::Spec("product needs between 1 and 16 components".into()));
        }
        for c in &children {
            if c.alphabet_size() != 2 {
                return Err(WordsError::NotBinary(c.alphabet_size()));
            }
        }
        Ok(SequenceSource::Product(children))
    }

    pub fn shifted(self, k: u64) -> Self {
        match self {
            SequenceSource::Shifted(inner, j) => SequenceSource::Shifted(inner, j + k),
            other if k == 0 => other,
            other => SequenceSource::Shifted(Box::new(other), k),
        }
    }

    pub fn encoded(self, m: u32) -> Result<Self, WordsError> {
        if m == 0 {
            return Err(WordsError::EmptyAlphabet);
        }
        if self.alphabet_size() > m {
            return Err(WordsError::SymbolOutOfRange { symbol: self.alphabet_size() - 1, size: m });
        }
        Ok(SequenceSource::Encoded(Box::new(self), m))
    }

    pub fn decoded(self, m: u32) -> Result<Self, WordsError> {
        if m == 0 {
            return Err(WordsError::EmptyAlphabet);
        }
        if self.alphabet_size() != 2 && !(m == 1 && self.alphabet_size() == 1) {
            return Err(WordsError::NotBinary(self.alphabet_size()));
        }
        Ok(SequenceSource::Decoded(Box::new(self), m))
    }

    pub fn alphabet_size(&self) -> u32 {
        match self {
            SequenceSource::Sturmian(_) => 2,
            SequenceSource::Periodic(w) => w.alphabet_size(),
            SequenceSource::PrefixExtended { prefix, pad } => match pad {
                Padding::Constant(c) => prefix.alphabet_size().max(c + 1),
                Padding::Periodic(w) => prefix.alphabet_size().max(w.alphabet_size()),
            },
            SequenceSource::Product(cs) => 1 << cs.len(),
            SequenceSource::Shifted(inner, _) => inner.alphabet_size(),
            SequenceSource::Encoded(_, _) => 2,
            SequenceSource::Decoded(_, m) => *m,
        }
    }

    pub fn symbol_at(&self, i: u64) -> Result<Symbol, WordsError> {
        if i == 0 {
            return Err(WordsError::IndexZero);
        }
        let v = self.fill(i, 1)?[0];
        Symbol::new(v, self.alphabet_size())
    }

    /// Symbols at indices `from .. from + count` (indices start at 1).
    pub fn fill(&self, from: u64, count: usize) -> Result<Vec<u32>, WordsError> {
        if from == 0 {
            return Err(WordsError::IndexZero);
        }
        match self {
            SequenceSource::Sturmian(s) => Ok(s.fill(from, count)),
            SequenceSource::Periodic(w) => {
                let p = w.len() as u64;
                Ok((0..count as u64).map(|k| w.symbols()[((from - 1 + k) % p) as usize]).collect())
            }
            SequenceSource::PrefixExtended { prefix, pad } => {
                let len = prefix.len() as u64;
                Ok((0..count as u64)
                    .map(|k| {
                        let i = from + k;
                        if i <= len {
                            prefix.symbols()[(i - 1) as usize]
                        } else {
                            match pad {
                                Padding::Constant(c) => *c,
                                Padding::Periodic(w) => w.symbols()[((i - len - 1) % w.len() as u64) as usize],
                            }
                        }
                    })
                    .collect())
            }
            SequenceSource::Product(cs) => {
                let mut out = vec![0u32; count];
                for (j, c) in cs.iter().enumerate() {
                    for (o, x) in out.iter_mut().zip(c.fill(from, count)?) {
                        *o |= x << j;
                    }
                }
                Ok(out)
            }
            SequenceSource::Shifted(inner, k) => inner.fill(from + k, count),
            SequenceSource::Encoded(inner, m) => {
                let m64 = *m as u64;
                if count == 0 {
                    return Ok(Vec::new());
                }
                let first_block = (from - 1) / m64 + 1;
                let last_block = (from + count as u64 - 2) / m64 + 1;
                let zs = inner.fill(first_block, (last_block - first_block + 1) as usize)?;
                (0..count as u64)
                    .map(|k| {
                        let j = from + k;
                        let b = (j - 1) / m64 + 1;
                        let z = zs[(b - first_block) as usize];
                        if z >= *m {
                            return Err(WordsError::SymbolOutOfRange { symbol: z, size: *m });
                        }
                        Ok(u32::from(j == m64 * b - z as u64))
                    })
                    .collect()
            }
            SequenceSource::Decoded(inner, m) => {
                let m64 = *m as u64;
                let xs = inner.fill(m64 * (from - 1) + 1, count * *m as usize)?;
                xs.chunks(*m as usize)
                    .enumerate()
                    .map(|(b, block)| decode_block(block, from + b as u64))
                    .collect()
            }
        }
    }

    pub fn generate_prefix(&self, len: usize) -> Result<Word, WordsError> {
        Word::new(self.fill(1, len)?, self.alphabet_size())
    }

    /// Canonical textual spec, accepted by [`super::parse_source`].
    pub fn to_spec(&self) -> String {
        self.to_string()
    }
}

/// The offset `k` with a 1 at block position `m - k` (1-based).
fn decode_block(block: &[u32], index: u64) -> Result<u32, WordsError> {
    let m = block.len();
    if let Some(&bad) = block.iter().find(|&&x| x > 1) {
        return Err(WordsError::NotBinary(bad + 1));
    }
    let ones: Vec<usize> = block.iter().enumerate().filter(|(_, &x)| x == 1).map(|(p, _)| p).collect();
    if ones.len() != 1 {
        return Err(WordsError::Decode { block: index, ones: ones.len() });
    }
    // position p (0-based) is index m(i-1) + p + 1 = m i - k, so k = m - 1 - p.
    Ok((m - 1 - ones[0]) as u32)
}

impl fmt::Display for SequenceSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSource::Sturmian(s) => {
                let variant = match s.variant {
                    Variant::Floor => "floor",
                    Variant::Ceiling => "ceiling",
                };
                write!(f, "sturmian:gamma={},z={},variant={variant}", s.gamma, s.z)
            }
            SequenceSource::Periodic(w) => write!(f, "periodic:{}", word_token(w)),
            SequenceSource::PrefixExtended { prefix, pad } => {
                write!(f, "prefix:{}", word_token(prefix))?;
                match pad {
                    Padding::Constant(c) => write!(f, ",pad={c}"),
                    Padding::Periodic(w) => write!(f, ",pad=cycle({})", word_text(w)),
                }
            }
            SequenceSource::Product(cs) => {
                let parts: Vec<String> = cs.iter().map(ToString::to_string).collect();
                write!(f, "product:[{}]", parts.join(";"))
            }
            SequenceSource::Shifted(inner, k) => write!(f, "shift:k={k},inner={inner}"),
            SequenceSource::Encoded(inner, m) => write!(f, "encode:m={m},inner={inner}"),
            SequenceSource::Decoded(inner, m) => write!(f, "decode:m={m},inner={inner}"),
        }
    }
}

fn word_text(w: &Word) -> String {
    if w.alphabet_size() <= 10 {
        w.to_string()
    } else {
        let parts: Vec<String> = w.symbols().iter().map(u32::to_string).collect();
        parts.join(".")
    }
}

fn word_token(w: &Word) -> String {
    format!("{},m={}", word_text(w), w.alphabet_size())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> SturmianSpec {
        SturmianSpec::with_gamma("(3-sqrt5)/2".parse().unwrap()).unwrap()
    }

    #[test]
    fn golden_rotation_prefix() {
        let s = SequenceSource::Sturmian(golden());
        assert_eq!(s.generate_prefix(6).unwrap().to_string(), "010010");
        assert_eq!(golden().symbol_at(1).unwrap().value(), 0);
        assert_eq!(golden().symbol_at(2).unwrap().value(), 1);
    }

    #[test]
    fn symbol_at_agrees_with_fill() {
        let s = SequenceSource::Sturmian(golden());
        let block = s.fill(1000, 50).unwrap();
        for (k, &v) in block.iter().enumerate() {
            assert_eq!(s.symbol_at(1000 + k as u64).unwrap().value(), v);
        }
    }

    #[test]
    fn exact_floor_beyond_machine_words() {
        let s = golden();
        let i = u64::MAX - 10;
        let v = s.symbol_at(i).unwrap().value();
        // Reference through the generic big-integer path.
        let g = s.gamma();
        let f = |k: u64| g.mul_int(&Integer::from(k)).floor();
        assert_eq!((f(i + 1) - f(i)), v);
    }

    #[test]
    fn ceiling_variant_differs_only_at_offset_hits() {
        let g: QuadraticIrrational = "(3-sqrt5)/2".parse().unwrap();
        let fl = SturmianSpec::new(g.clone(), QuadraticIrrational::from_int(0), Variant::Floor).unwrap();
        let ce = SturmianSpec::new(g, QuadraticIrrational::from_int(0), Variant::Ceiling).unwrap();
        // i gamma is never an integer for i >= 1, so the codings agree.
        assert_eq!(fl.fill(1, 500), ce.fill(1, 500));
    }

    #[test]
    fn rejects_bad_rotations() {
        assert_eq!(SturmianSpec::with_gamma("1/3".parse().unwrap()), Err(WordsError::RationalGamma));
        assert!(SturmianSpec::with_gamma("sqrt2".parse().unwrap()).is_err());
        let g = "(3-sqrt5)/2".parse().unwrap();
        assert!(SturmianSpec::new(g, "sqrt2-1".parse().unwrap(), Variant::Floor).is_err());
    }

    #[test]
    fn offset_reduced_mod_one() {
        let g: QuadraticIrrational = "(3-sqrt5)/2".parse().unwrap();
        let a = SturmianSpec::new(g.clone(), "7/4".parse().unwrap(), Variant::Floor).unwrap();
        let b = SturmianSpec::new(g, "3/4".parse().unwrap(), Variant::Floor).unwrap();
        assert_eq!(a.offset(), b.offset());
        assert_eq!(a.fill(1, 100), b.fill(1, 100));
    }

    #[test]
    fn periodic_shift_and_products() {
        let p = SequenceSource::periodic_digits("01").unwrap();
        assert_eq!(p.generate_prefix(5).unwrap().to_string(), "01010");
        assert_eq!(p.clone().shifted(1).generate_prefix(4).unwrap().to_string(), "1010");
        let prod = SequenceSource::product(vec![
            SequenceSource::periodic_digits("0").unwrap().clone(),
            SequenceSource::periodic(Word::from_digits("1", 2).unwrap()).unwrap(),
        ])
        .unwrap();
        assert_eq!(prod.generate_prefix(3).unwrap().symbols(), &[2, 2, 2]);
        assert_eq!(prod.alphabet_size(), 4);
    }

    #[test]
    fn prefix_padding() {
        let s = SequenceSource::prefix_extended(
            Word::from_digits("0011", 2).unwrap(),
            Padding::Periodic(Word::from_digits("01", 2).unwrap()),
        )
        .unwrap();
        assert_eq!(s.generate_prefix(9).unwrap().to_string(), "001101010");
        let c = SequenceSource::prefix_extended(Word::from_digits("1", 2).unwrap(), Padding::Constant(0)).unwrap();
        assert_eq!(c.generate_prefix(3).unwrap().to_string(), "100");
    }

    #[test]
    fn encode_decode_examples() {
        let z = SequenceSource::prefix_extended(Word::from_digits("010", 2).unwrap(), Padding::Constant(0)).unwrap();
        let x = z.clone().encoded(2).unwrap();
        assert_eq!(x.generate_prefix(6).unwrap().to_string(), "011001");
        let z3 = SequenceSource::prefix_extended(Word::from_digits("20", 3).unwrap(), Padding::Constant(0)).unwrap();
        assert_eq!(z3.encoded(3).unwrap().generate_prefix(6).unwrap().to_string(), "100001");
        let back = x.decoded(2).unwrap();
        assert_eq!(back.generate_prefix(3).unwrap(), z.generate_prefix(3).unwrap());
        let ones = SequenceSource::periodic_digits("1").unwrap().decoded(2).unwrap();
        assert_eq!(ones.fill(1, 1), Err(WordsError::Decode { block: 1, ones: 2 }));
    }
}
