//! Text specs for sequence sources, e.g.
//! `sturmian:gamma=(3-sqrt5)/2,z=0,variant=floor`, `periodic:01`,
//! `prefix:0011,pad=cycle(01)`, `product:[spec;spec]`,
//! `shift:k=3,inner=spec`, `encode:m=4,inner=spec`, `decode:m=4,inner=spec`.

use super::quadratic::QuadraticIrrational;
use super::source::{Padding, SequenceSource, SturmianSpec, Variant};
use super::{Word, WordsError};

fn err(msg: impl Into<String>) -> WordsError {
    WordsError::Spec(msg.into())
}

/// Splits at top-level commas; an `inner=` item swallows the rest.
fn split_items(body: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = body.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if depth == 0 && i == start && body[i..].starts_with("inner=") {
            out.push(&body[start..]);
            return out;
        }
        match bytes[i] {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth -= 1,
            b',' if depth == 0 => {
                out.push(&body[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    out.push(&body[start..]);
    out
}

struct Items<'a> {
    positional: Vec<&'a str>,
    keyed: Vec<(&'a str, &'a str)>,
}

impl<'a> Items<'a> {
    fn parse(body: &'a str) -> Self {
        let mut positional = Vec::new();
        let mut keyed = Vec::new();
        for item in split_items(body) {
            let item = item.trim();
            match item.split_once('=') {
                Some((k, v)) if k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') && !k.is_empty() => {
                    keyed.push((k.trim(), v.trim()))
                }
                _ if item.is_empty() => {}
                _ => positional.push(item),
            }
        }
        Items { positional, keyed }
    }

    fn get(&self, key: &str) -> Option<&'a str> {
        self.keyed.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }

    fn require(&self, key: &str, kind: &str) -> Result<&'a str, WordsError> {
        self.get(key).ok_or_else(|| err(format!("{kind} needs {key}=")))
    }

    fn check_keys(&self, kind: &str, allowed: &[&str]) -> Result<(), WordsError> {
        for (k, _) in &self.keyed {
            if !allowed.contains(k) {
                return Err(err(format!("unknown key {k:?} for {kind}")));
            }
        }
        Ok(())
    }
}

fn parse_u64(s: &str, what: &str) -> Result<u64, WordsError> {
    s.parse().map_err(|_| err(format!("{what} must be a nonnegative integer, got {s:?}")))
}

fn word_with_alphabet(text: &str, m: Option<&str>) -> Result<Word, WordsError> {
    let raw = Word::parse(text, u32::MAX)?;
    let m = match m {
        Some(m) => parse_u64(m, "m")? as u32,
        None => raw.symbols().iter().max().map_or(2, |&x| (x + 1).max(2)),
    };
    Word::new(raw.into_symbols(), m)
}

pub fn parse_source(spec: &str) -> Result<SequenceSource, WordsError> {
    let spec = spec.trim();
    let (kind, body) = spec.split_once(':').ok_or_else(|| err(format!("missing ':' in {spec:?}")))?;
    let kind = kind.trim();
    match kind {
        "sturmian" => {
            let it = Items::parse(body);
            it.check_keys(kind, &["gamma", "z", "variant"])?;
            let gamma: QuadraticIrrational = it.require("gamma", kind)?.parse()?;
            let z: QuadraticIrrational = it.get("z").unwrap_or("0").parse()?;
            let variant = match it.get("variant").unwrap_or("floor") {
                "floor" => Variant::Floor,
                "ceiling" | "ceil" => Variant::Ceiling,
                v => return Err(err(format!("unknown variant {v:?}"))),
            };
            Ok(SequenceSource::Sturmian(SturmianSpec::new(gamma, z, variant)?))
        }
        "periodic" => {
            let it = Items::parse(body);
            it.check_keys(kind, &["m"])?;
            let text = it.positional.first().ok_or_else(|| err("periodic needs a word"))?;
            SequenceSource::periodic(word_with_alphabet(text, it.get("m"))?)
        }
        "prefix" => {
            let it = Items::parse(body);
            it.check_keys(kind, &["m", "pad"])?;
            let text = it.positional.first().copied().unwrap_or("");
            let prefix = word_with_alphabet(text, it.get("m"))?;
            let pad_text = it.get("pad").unwrap_or("0");
            let pad = if let Some(inner) = pad_text.strip_prefix("cycle(").and_then(|r| r.strip_suffix(')')) {
                Padding::Periodic(word_with_alphabet(inner, it.get("m"))?)
            } else {
                Padding::Constant(parse_u64(pad_text, "pad")? as u32)
            };
            SequenceSource::prefix_extended(prefix, pad)
        }
        "product" => {
            let inner = body
                .trim()
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| err("product needs [spec;spec;...]"))?;
            let mut parts = Vec::new();
            let mut depth = 0i32;
            let mut start = 0;
            for (i, c) in inner.char_indices() {
                match c {
                    '(' | '[' => depth += 1,
                    ')' | ']' => depth -= 1,
                    ';' if depth == 0 => {
                        parts.push(&inner[start..i]);
                        start = i + 1;
                    }
                    _ => {}
                }
            }
            parts.push(&inner[start..]);
            let children = parts.into_iter().map(parse_source).collect::<Result<Vec<_>, _>>()?;
            SequenceSource::product(children)
        }
        "shift" | "encode" | "decode" => {
            let it = Items::parse(body);
            let key = if kind == "shift" { "k" } else { "m" };
            it.check_keys(kind, &[key, "inner"])?;
            let n = parse_u64(it.require(key, kind)?, key)?;
            let inner = parse_source(it.require("inner", kind)?)?;
            match kind {
                "shift" => Ok(inner.shifted(n)),
                "encode" => inner.encoded(n as u32),
                _ => inner.decoded(n as u32),
            }
        }
        other => Err(err(format!("unknown sequence kind {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prefix(spec: &str, n: usize) -> String {
        parse_source(spec).unwrap().generate_prefix(n).unwrap().to_string()
    }

    #[test]
    fn documented_forms() {
        assert_eq!(prefix("sturmian:gamma=(3-sqrt5)/2,z=0,variant=floor", 6), "010010");
        assert_eq!(prefix("sturmian:gamma=(3-sqrt5)/2", 6), "010010");
        assert_eq!(prefix("periodic:01", 5), "01010");
        assert_eq!(prefix("shift:k=1,inner=periodic:01", 4), "1010");
        assert_eq!(prefix("prefix:0011,pad=cycle(01)", 8), "00110101");
        assert_eq!(prefix("encode:m=3,inner=prefix:20,m=3,pad=0", 6), "100001");
        assert_eq!(prefix("product:[periodic:0;periodic:1]", 3), "222");
    }

    #[test]
    fn nested_specs_round_trip() {
        for s in [
            "sturmian:gamma=(3-sqrt5)/2,z=1/3,variant=ceiling",
            "encode:m=4,inner=product:[sturmian:gamma=(3-sqrt5)/2;sturmian:gamma=1-sqrt2/2]",
            "shift:k=3,inner=decode:m=2,inner=encode:m=2,inner=periodic:01",
            "prefix:0110,pad=cycle(01)",
            "periodic:3.11.0,m=16",
        ] {
            let a = parse_source(s).unwrap();
            let b = parse_source(&a.to_spec()).unwrap();
            assert_eq!(a.generate_prefix(64).unwrap(), b.generate_prefix(64).unwrap(), "{s}");
        }
    }

    #[test]
    fn errors() {
        assert!(parse_source("sturmian:gamma=1/2").is_err());
        assert!(parse_source("sturmian:z=0").is_err());
        assert!(parse_source("periodic:").is_err());
        assert!(parse_source("bogus:1").is_err());
        assert!(parse_source("periodic:01,q=2").is_err());
        assert!(parse_source("product:[periodic:012]").is_err());
    }
}
