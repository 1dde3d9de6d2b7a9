use proptest::prelude::*;
use rug::{Integer, Rational};

use extremal::families::{btv_pair, jb_pair, kron_family, reduced_generator, restricted_to_middle_block, scale_family, toy_family, BlockLayout, Param};
use extremal::jsr::{jsr_bounds, JsrConfig};
use extremal::lift::{decode_finite, decode_word, encode_finite, encode_word, survives, verify_encode_product, verify_feqt};
use extremal::linalg::{op_norm, spectral_radius, Exact, Matrix, MatrixFamily, Valuation};
use extremal::precision::{alpha_star, recursion_term, BigReal, RecursionKind};
use extremal::words::{factor_counts, is_balanced, QuadraticIrrational, SequenceSource, SturmianSpec, Variant, Word};

const PREC: u32 = 256;

fn int2(vals: [i64; 4]) -> Matrix<Integer> {
    Matrix::from_i64(2, 2, &vals)
}

fn family_of(ms: &[[i64; 4]]) -> MatrixFamily {
    let members = ms.iter().map(|v| int2(*v).map(|x| Exact::int(x.to_i64().unwrap()))).collect();
    MatrixFamily::new(members, Valuation::new(), "prop").unwrap()
}

fn entries() -> impl Strategy<Value = [i64; 4]> {
    prop::array::uniform4(-4i64..=4)
}

fn word(m: u32, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..m, 0..=max_len).prop_map(move |s| Word::new(s, m).unwrap())
}

fn sturmian() -> impl Strategy<Value = SequenceSource> {
    (
        -5i64..5,
        prop_oneof![1i64..4, -3i64..0],
        prop::sample::select(vec![2i64, 3, 5, 6, 7, 10]),
        1i64..6,
        0i64..7,
        any::<bool>(),
    )
        .prop_map(|(a, b, d, c, z, floor)| {
            let gamma = QuadraticIrrational::new(a, b, d, c).unwrap().fract();
            let z = QuadraticIrrational::rational(Rational::from((z, 7)));
            let v = if floor { Variant::Floor } else { Variant::Ceiling };
            SequenceSource::Sturmian(SturmianSpec::new(gamma, z, v).unwrap())
        })
}

fn inside(x: &BigReal, exact: &Rational) -> bool {
    x.lower() <= *exact && *exact <= x.upper()
}

fn cfg(depth: usize) -> JsrConfig {
    JsrConfig { max_depth: depth, budget: 1_000_000, digits: 30 }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn word_text_round_trip(w in word(7, 40)) {
        prop_assert_eq!(Word::parse(&w.to_string(), 7).unwrap(), w);
    }

    #[test]
    fn sturmian_prefixes_are_balanced(s in sturmian(), len in 1usize..3000) {
        let w = s.generate_prefix(len).unwrap();
        prop_assert!(is_balanced(&w).unwrap().balanced);
    }

    #[test]
    fn sturmian_complexity_is_n_plus_one(s in sturmian()) {
        let w = s.generate_prefix(4000).unwrap();
        let c = factor_counts(w.symbols(), 12);
        for n in 1..=12 {
            prop_assert_eq!(c[n], n + 1);
        }
    }

    #[test]
    fn periodic_profile_bounded_by_period(u in word(2, 12).prop_filter("nonempty", |w| !w.is_empty()), n in 1usize..30) {
        let s = SequenceSource::periodic(u.clone()).unwrap();
        let w = s.generate_prefix(200).unwrap();
        let c = factor_counts(w.symbols(), n + 1);
        prop_assert!(c[n] <= u.len());
        prop_assert!(c[n + 1] >= c[n]);
    }

    #[test]
    fn encode_decode_round_trip(m in 1u32..6, seed in word(5, 30)) {
        let z = Word::new(seed.symbols().iter().map(|s| s % m).collect(), m).unwrap();
        let x = encode_finite(&z, m).unwrap();
        prop_assert_eq!(x.len(), z.len() * m as usize);
        for block in x.symbols().chunks(m as usize) {
            prop_assert_eq!(block.iter().filter(|&&b| b == 1).count(), 1);
        }
        prop_assert_eq!(decode_finite(&x, m).unwrap(), z.clone());
        if !z.is_empty() {
            let src = SequenceSource::periodic(z.clone()).unwrap();
            let back = decode_word(&encode_word(&src, m).unwrap(), m).unwrap();
            prop_assert_eq!(back.generate_prefix(2 * z.len()).unwrap(), src.generate_prefix(2 * z.len()).unwrap());
        }
    }

    #[test]
    fn kron_mixed_product_and_transpose(a in entries(), b in entries(), c in entries(), d in entries()) {
        let (a, b, c, d) = (int2(a), int2(b), int2(c), int2(d));
        let left = a.kron(&b).multiply(&c.kron(&d)).unwrap();
        let right = a.multiply(&c).unwrap().kron(&b.multiply(&d).unwrap());
        prop_assert_eq!(left, right);
        prop_assert_eq!(a.kron(&b).transpose(), a.transpose().kron(&b.transpose()));
    }

    #[test]
    fn norm_dominates_radius_and_is_submultiplicative(a in entries(), b in entries()) {
        let (a, b) = (Matrix::from_integers(&int2(a), PREC), Matrix::from_integers(&int2(b), PREC));
        let na = op_norm(&a).unwrap();
        let nb = op_norm(&b).unwrap();
        prop_assert!(spectral_radius(&a).unwrap().possibly_le(&na));
        let nab = op_norm(&a.multiply(&b).unwrap()).unwrap();
        prop_assert!(nab.possibly_le(&na.mul(&nb)));
    }

    #[test]
    fn kron_norm_and_radius_multiply(a in entries(), b in entries()) {
        let (a, b) = (Matrix::from_integers(&int2(a), PREC), Matrix::from_integers(&int2(b), PREC));
        let ab = a.kron(&b);
        prop_assert!(op_norm(&ab).unwrap().overlaps(&op_norm(&a).unwrap().mul(&op_norm(&b).unwrap())));
        let r = spectral_radius(&ab).unwrap().to_f64();
        let p = spectral_radius(&a).unwrap().to_f64() * spectral_radius(&b).unwrap().to_f64();
        prop_assert!((r - p).abs() <= 1e-8 * p.max(1.0), "{r} vs {p}");
    }

    #[test]
    fn interval_arithmetic_contains_exact(p in -10_000i64..10_000, q in 1i64..500, r in -10_000i64..10_000, s in 1i64..500) {
        let (x, y) = (Rational::from((p, q)), Rational::from((r, s)));
        let (bx, by) = (BigReal::from_rational(&x, 60), BigReal::from_rational(&y, 60));
        prop_assert!(inside(&bx.add(&by), &Rational::from(&x + &y)));
        prop_assert!(inside(&bx.sub(&by), &Rational::from(&x - &y)));
        prop_assert!(inside(&bx.mul(&by), &Rational::from(&x * &y)));
        if r != 0 {
            prop_assert!(inside(&bx.div(&by), &Rational::from(&x / &y)));
        }
        let sq = BigReal::from_rational(&Rational::from(&x * &x), 60).sqrt();
        prop_assert!(inside(&sq, &x.clone().abs()));
    }

    #[test]
    fn scalar_extraction_in_norm(a in entries(), num in 1i64..9, den in 1i64..9) {
        let c = Rational::from((num, den));
        let pat = Matrix::from_integers(&int2(a), PREC);
        let scaled = pat.scale(&BigReal::from_rational(&c, PREC));
        let lhs = op_norm(&scaled).unwrap();
        let rhs = op_norm(&pat).unwrap().mul(&BigReal::from_rational(&c, PREC));
        prop_assert!(lhs.overlaps(&rhs));
    }

    #[test]
    fn block_identities_hold_exactly(m in 2usize..4, seed in word(3, 7)) {
        let fam = toy_family(m);
        let w = Word::new(seed.symbols().iter().map(|s| s % m as u32).collect(), m as u32).unwrap();
        prop_assert!(verify_feqt(&fam, &w).unwrap());
        prop_assert!(verify_encode_product(&fam, &w).unwrap());
    }

    #[test]
    fn surviving_words_have_one_mark_per_block(m in 2usize..5, bits in prop::collection::vec(0u32..2, 0..20)) {
        let x = Word::new(bits, 2).unwrap();
        if survives(&x, m, m - 1) {
            for block in x.symbols().chunks_exact(m) {
                prop_assert_eq!(block.iter().filter(|&&b| b == 1).count(), 1);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn jsr_lower_below_upper_and_monotone(a in entries(), b in entries()) {
        let fam = family_of(&[a, b]);
        let shallow = jsr_bounds(&fam, &cfg(3)).unwrap();
        let deep = jsr_bounds(&fam, &cfg(6)).unwrap();
        for r in [&shallow, &deep] {
            prop_assert!(r.lower.possibly_le(&r.upper));
        }
        prop_assert!(shallow.lower.possibly_le(&deep.lower));
        prop_assert!(deep.upper.possibly_le(&shallow.upper));
    }

    #[test]
    fn jsr_scaling_law(a in entries(), b in entries(), num in 1i64..7, den in 1i64..7, neg in any::<bool>()) {
        let fam = family_of(&[a, b]);
        let c = Rational::from((if neg { -num } else { num }, den));
        let scaled = scale_family(&fam, &c).unwrap();
        let abs_c = BigReal::from_rational(&c.clone().abs(), PREC);
        let base = jsr_bounds(&fam, &cfg(5)).unwrap();
        let s = jsr_bounds(&scaled, &cfg(5)).unwrap();
        prop_assert!(s.lower.overlaps(&base.lower.mul(&abs_c)));
        prop_assert!(s.upper.overlaps(&base.upper.mul(&abs_c)));
    }

    #[test]
    fn btv_bounds_bracket_each_other(num in 1i64..=8) {
        let alpha = Param::Rational(Rational::from((num, 8)));
        let fam = btv_pair(&alpha);
        let r = jsr_bounds(&fam, &cfg(8)).unwrap();
        prop_assert!(r.lower.possibly_le(&r.upper));
        // A_0 A_1 = a [[2, 1], [1, 1]], whose spectral radius is a phi^2;
        // A_0 alone has spectral radius 1.
        let a = num as f64 / 8.0;
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let rho01 = (a.sqrt() * phi).max(1.0);
        prop_assert!(r.lower.to_f64() >= rho01 - 1e-12);
    }
}

#[test]
fn recursions_match_base_cases_and_grow() {
    let check = |kind: RecursionKind, base: &[i64], upto: i64| {
        let b = kind.base();
        for (i, v) in base.iter().enumerate() {
            assert_eq!(recursion_term(kind, b + i as i64).unwrap(), Rational::from(*v), "{kind:?}");
        }
        let mut prev = recursion_term(kind, 1).unwrap();
        for n in 2..=upto {
            let t = recursion_term(kind, n).unwrap();
            assert!(t > prev, "{kind:?} not increasing at {n}");
            prev = t;
        }
    };
    check(RecursionKind::Fibonacci, &[1, 1, 2, 3, 5, 8], 40);
    check(RecursionKind::G, &[1, 2, 5, 12, 29], 40);
    check(RecursionKind::Tau, &[1, 2, 2, 3], 9);
    check(RecursionKind::T, &[1, 2, 2], 7);
    for n in 1..=9 {
        assert_eq!(*recursion_term(RecursionKind::Tau, n).unwrap().denom(), 1);
    }
}

#[test]
fn constant_enclosures_nest_when_precision_grows() {
    let coarse = alpha_star(20).unwrap();
    let fine = alpha_star(60).unwrap();
    assert!(fine.lower() >= coarse.lower() && fine.upper() <= coarse.upper());
    assert!(coarse.lower() > 0 && coarse.upper() < 1);
}

#[test]
fn lift_structure() {
    for m in 1..=4 {
        let fam = toy_family(m);
        let pair = jb_pair(&fam);
        let layout = BlockLayout { m, d: 1 };
        assert!(pair.member(0).pow((2 * m - 1) as u32).unwrap().is_zero());
        let b1 = pair.member(1);
        for i in 0..layout.blocks() {
            for j in 0..layout.blocks() {
                let blk = b1.block(i, j, 1);
                if j >= m || i < m - 1 {
                    assert!(blk.is_zero(), "m={m} block ({i},{j})");
                }
            }
        }
        for j in 0..m {
            let g = reduced_generator(&pair, m, j).unwrap();
            assert_eq!(restricted_to_middle_block(&g, layout), *fam.member(j));
        }
    }
}

#[test]
fn kron_family_shape() {
    for p in 1..=3 {
        let params: Vec<Param> = (0..p).map(|i| Param::Rational(Rational::from((i + 1, 4)))).collect();
        let f = kron_family(&params).unwrap();
        assert_eq!(f.len(), 1 << p);
        assert_eq!(f.dim(), 1 << p);
        assert!(f.member(0).data().iter().all(|e| e.as_integer().is_some()));
    }
}
