use std::collections::HashSet;

use serde::Serialize;

use super::{SequenceSource, Word, WordsError};

/// Number of distinct length-`n` windows of `w`.
pub fn subword_complexity(w: &Word, n: usize) -> Result<usize, WordsError> {
    if n == 0 {
        return Err(WordsError::ZeroWindow);
    }
    if n > w.len() {
        return Err(WordsError::WindowExceedsWord { n, len: w.len() });
    }
    let set: HashSet<&[u32]> = w.symbols().windows(n).collect();
    Ok(set.len())
}

/// Suffix automaton with dense transitions over a small alphabet.
struct SuffixAutomaton {
    len: Vec<usize>,
    link: Vec<usize>,
    next: Vec<u32>,
    sigma: usize,
}

const NONE: u32 = u32::MAX;

impl SuffixAutomaton {
    fn build(s: &[u32], sigma: usize) -> Self {
        let cap = 2 * s.len() + 1;
        let mut sa = SuffixAutomaton {
            len: Vec::with_capacity(cap),
            link: Vec::with_capacity(cap),
            next: Vec::with_capacity(cap * sigma),
            sigma,
        };
        sa.push_state(0, usize::MAX);
        let mut last = 0usize;
        for &c in s {
            let c = c as usize;
            let cur = sa.push_state(sa.len[last] + 1, 0);
            let mut p = last;
            loop {
                if sa.get(p, c) != NONE {
                    break;
                }
                sa.set(p, c, cur);
                if sa.link[p] == usize::MAX {
                    p = usize::MAX;
                    break;
                }
                p = sa.link[p];
            }
            if p != usize::MAX {
                let q = sa.get(p, c) as usize;
                if sa.len[p] + 1 == sa.len[q] {
                    sa.link[cur] = q;
                } else {
                    let clone = sa.push_state(sa.len[p] + 1, sa.link[q]);
                    let (src, dst) = (q * sigma, clone * sigma);
                    for k in 0..sigma {
                        sa.next[dst + k] = sa.next[src + k];
                    }
                    loop {
                        if sa.get(p, c) as usize != q {
                            break;
                        }
                        sa.set(p, c, clone);
                        if sa.link[p] == usize::MAX {
                            break;
                        }
                        p = sa.link[p];
                    }
                    sa.link[q] = clone;
                    sa.link[cur] = clone;
                }
            }
            last = cur;
        }
        sa
    }

    fn push_state(&mut self, len: usize, link: usize) -> usize {
        self.len.push(len);
        self.link.push(link);
        self.next.extend(std::iter::repeat_n(NONE, self.sigma));
        self.len.len() - 1
    }

    fn get(&self, state: usize, c: usize) -> u32 {
        self.next[state * self.sigma + c]
    }

    fn set(&mut self, state: usize, c: usize, to: usize) {
        self.next[state * self.sigma + c] = to as u32;
    }
}

/// Distinct-factor counts of `w` for every length `1..=n_max` at once;
/// index `n` of the result holds the count for length `n` (index 0 unused).
pub fn factor_counts(w: &[u32], n_max: usize) -> Vec<usize> {
    let mut diff = vec![0i64; n_max + 2];
    if w.is_empty() || n_max == 0 {
        return vec![0; n_max + 1];
    }
    let sigma = *w.iter().max().unwrap() as usize + 1;
    let sa = if sigma <= 64 {
        SuffixAutomaton::build(w, sigma)
    } else {
        // Compact a sparse alphabet before allocating dense transitions.
        let mut letters: Vec<u32> = w.to_vec();
        letters.sort_unstable();
        letters.dedup();
        let dense: Vec<u32> = w.iter().map(|x| letters.binary_search(x).unwrap() as u32).collect();
        SuffixAutomaton::build(&dense, letters.len())
    };
    // State v covers factor lengths (len(link v), len v].
    for v in 1..sa.len.len() {
        let lo = sa.len[sa.link[v]] + 1;
        let hi = sa.len[v].min(n_max);
        if lo <= hi {
            diff[lo] += 1;
            diff[hi + 1] -= 1;
        }
    }
    let mut out = vec![0usize; n_max + 1];
    let mut acc = 0i64;
    for n in 1..=n_max {
        acc += diff[n];
        out[n] = acc as usize;
    }
    out
}

/// Initial window and growth cap for windowed complexity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WindowPolicy {
    pub initial: usize,
    pub cap: usize,
}

impl Default for WindowPolicy {
    fn default() -> Self {
        WindowPolicy { initial: 1024, cap: 1_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexityEntry {
    pub n: usize,
    pub count: usize,
    pub window: usize,
    pub saturated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexityProfile {
    pub entries: Vec<ComplexityEntry>,
}

impl ComplexityProfile {
    pub fn count(&self, n: usize) -> Option<usize> {
        self.entries.iter().find(|e| e.n == n).map(|e| e.count)
    }

    pub fn all_saturated(&self) -> bool {
        self.entries.iter().all(|e| e.saturated)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,count,window,saturated\n");
        for e in &self.entries {
            s.push_str(&format!("{},{},{},{}\n", e.n, e.count, e.window, e.saturated));
        }
        s
    }
}

/// Windowed factor counts for `n = 1..=n_max`. Each count is reported once
/// it is unchanged across a doubling of the window; counts still moving when
/// the cap is reached are reported unsaturated.
pub fn complexity_profile(
    source: &SequenceSource,
    n_max: usize,
    policy: WindowPolicy,
) -> Result<ComplexityProfile, WordsError> {
    if n_max == 0 {
        return Err(WordsError::ZeroWindow);
    }
    let cap = policy.cap.max(n_max);
    let mut window = policy.initial.max(n_max).min(cap);
    let mut prefix = source.fill(1, window)?;
    let mut counts = factor_counts(&prefix, n_max);
    let mut settled: Vec<Option<ComplexityEntry>> = vec![None; n_max + 1];
    loop {
        if window >= cap {
            for n in 1..=n_max {
                settled[n].get_or_insert(ComplexityEntry { n, count: counts[n], window, saturated: false });
            }
            break;
        }
        let next = (window * 2).min(cap);
        let more = source.fill(window as u64 + 1, next - window)?;
        prefix.extend(more);
        let next_counts = factor_counts(&prefix, n_max);
        for n in 1..=n_max {
            if settled[n].is_none() && counts[n] == next_counts[n] {
                settled[n] = Some(ComplexityEntry { n, count: counts[n], window, saturated: true });
            }
        }
        window = next;
        counts = next_counts;
        if settled[1..].iter().all(Option::is_some) {
            break;
        }
    }
    Ok(ComplexityProfile { entries: settled.into_iter().skip(1).map(|e| e.unwrap()).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::SturmianSpec;

    fn brute(w: &[u32], n: usize) -> usize {
        w.windows(n).collect::<HashSet<_>>().len()
    }

    #[test]
    fn automaton_matches_brute_force() {
        let words: Vec<Vec<u32>> = vec![
            vec![0, 1, 1, 0, 1, 0, 0, 1, 1, 1, 0],
            vec![0; 12],
            vec![2, 0, 1, 3, 3, 1, 0, 2, 2, 1],
            (0..200).map(|i| ((i * i + 3 * i) % 5) as u32 % 3).collect(),
        ];
        for w in words {
            let c = factor_counts(&w, w.len());
            for n in 1..=w.len() {
                assert_eq!(c[n], brute(&w, n), "{w:?} n={n}");
            }
        }
    }

    #[test]
    fn hand_counts() {
        let p = SequenceSource::periodic_digits("01").unwrap().generate_prefix(100).unwrap();
        assert_eq!(subword_complexity(&p, 5).unwrap(), 2);
        let w = Word::from_digits("000", 2).unwrap();
        assert_eq!(subword_complexity(&w, 3).unwrap(), 1);
        assert_eq!(subword_complexity(&w, 4), Err(WordsError::WindowExceedsWord { n: 4, len: 3 }));
    }

    #[test]
    fn golden_sturmian_counts() {
        let s = SequenceSource::Sturmian(SturmianSpec::with_gamma("(3-sqrt5)/2".parse().unwrap()).unwrap());
        let w = s.generate_prefix(10_000).unwrap();
        assert_eq!(subword_complexity(&w, 10).unwrap(), 11);
        let prof = complexity_profile(&s, 20, WindowPolicy::default()).unwrap();
        for e in &prof.entries {
            assert_eq!(e.count, e.n + 1);
            assert!(e.saturated);
        }
    }

    #[test]
    fn periodic_profile_is_bounded() {
        let s = SequenceSource::periodic_digits("0110").unwrap();
        let prof = complexity_profile(&s, 6, WindowPolicy { initial: 16, cap: 1 << 12 }).unwrap();
        assert_eq!(prof.count(6), Some(4));
        assert!(prof.entries.iter().all(|e| e.count <= 4 && e.saturated));
    }

    #[test]
    fn cap_without_stability_is_flagged() {
        let s = SequenceSource::Sturmian(SturmianSpec::with_gamma("(3-sqrt5)/2".parse().unwrap()).unwrap());
        let prof = complexity_profile(&s, 30, WindowPolicy { initial: 8, cap: 64 }).unwrap();
        let last = prof.entries.last().unwrap();
        assert_eq!((last.n, last.window, last.saturated), (30, 64, false));
        assert!(last.count <= 64 - 30 + 1);
        assert!(!prof.all_saturated());
    }

    #[test]
    fn csv_header() {
        let s = SequenceSource::periodic_digits("01").unwrap();
        let csv = complexity_profile(&s, 2, WindowPolicy { initial: 8, cap: 64 }).unwrap().to_csv();
        assert!(csv.starts_with("n,count,window,saturated\n1,2,"));
    }
}
