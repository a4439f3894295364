//! Property tests over random inputs.

use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use catq::cartan::{gl_from_sl, sl_from_gl, CartanDatum, Weight};
use catq::field::FieldElem;
use catq::functors::{beth_scaling, compose, digamma, gimel_2cat, inverse, GeneratorScaling};
use catq::klr::{Gen, KlrAlgebra, RawMonomial};
use catq::params::{check_compat, symbolic_params, ParamSet, ParamsFile, SymbolNames};
use catq::ucat::text::{format_term, parse_term};
use catq::ucat::{grassmannian_check, reduce_local, DiagramTerm, Formal2Mor, GenKind, Letter, OneMor, SliceKind};

fn a2() -> CartanDatum {
    CartanDatum::type_a(2)
}

fn params(d: &CartanDatum, c: &str, cyclic: bool) -> Arc<ParamSet> {
    Arc::new(symbolic_params(d, &SymbolNames { c: c.into(), ..SymbolNames::default() }, cyclic).unwrap())
}

fn weight(d: &CartanDatum, p: &[i64]) -> Weight {
    d.weight_from_pairing(&d.coset_bases().unwrap(), p).unwrap()
}

/// Small Laurent-rational element built from a seed.
fn elem(seed: u64) -> FieldElem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let syms = ["x", "y", "z"];
    let mut num = FieldElem::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let mut m = FieldElem::from_i64(rng.gen_range(-3..=3));
        for s in syms {
            m = m * FieldElem::sym(s).pow(rng.gen_range(-2..=2));
        }
        num = num + m;
    }
    if rng.gen_bool(0.3) {
        num = num / (FieldElem::sym("x") + FieldElem::from_i64(rng.gen_range(1..=3)));
    }
    num
}

fn kinds(r: usize) -> Vec<GenKind> {
    use GenKind::*;
    let mut v = Vec::new();
    for i in 0..r {
        v.extend([UpDot(i), DownDot(i), CupLeft(i), CupRight(i), CapLeft(i), CapRight(i)]);
        for j in 0..r {
            v.extend([UpCross(i, j), DownCross(i, j), SideCrossLR(i, j), SideCrossRL(i, j)]);
        }
    }
    v
}

/// Random well-formed diagram: random source word, then random applicable generators.
fn diagram(d: &CartanDatum, seed: u64, steps: usize) -> DiagramTerm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lam = weight(d, &(0..d.rank()).map(|_| rng.gen_range(-3..=3)).collect::<Vec<_>>());
    let letters: Vec<Letter> = (0..rng.gen_range(0..=3))
        .map(|_| {
            let i = rng.gen_range(0..d.rank());
            if rng.gen_bool(0.5) {
                Letter::E(i)
            } else {
                Letter::F(i)
            }
        })
        .collect();
    let src = OneMor::new(lam, letters);
    let all = kinds(d.rank());
    let mut out: Vec<(SliceKind, usize)> = Vec::new();
    let mut cur = src.letters.clone();
    for _ in 0..steps {
        let mut cands = Vec::new();
        for &k in &all {
            let inp = k.input();
            if cur.len() + k.output().len() > 5 + inp.len() {
                continue;
            }
            for at in 0..=cur.len().saturating_sub(inp.len()) {
                if at + inp.len() <= cur.len() && cur[at..at + inp.len()] == inp[..] {
                    cands.push((k, at));
                }
            }
        }
        if cands.is_empty() {
            break;
        }
        let (k, at) = cands[rng.gen_range(0..cands.len())];
        cur.splice(at..at + k.input().len(), k.output());
        out.push((SliceKind::Gen(k), at));
    }
    DiagramTerm::build(src, &out).expect("generated diagrams are well formed")
}

fn prefix(t: &DiagramTerm, k: usize) -> (DiagramTerm, DiagramTerm) {
    let steps = t.steps();
    let lower = DiagramTerm::build(t.src.clone(), &steps[..k]).unwrap();
    let upper = DiagramTerm::build(lower.dst.clone(), &steps[k..]).unwrap();
    (lower, upper)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (a, b, c) = (elem(a), elem(b), elem(c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) * &c, &a * &c + &b * &c);
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b) / &b, a.clone());
            prop_assert!((&b * &b.inv()).is_one());
        }
    }

    #[test]
    fn field_text_round_trip(a in any::<u64>()) {
        let a = elem(a);
        let back: FieldElem = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn shift_changes_pairings_by_cartan_column(p in prop::collection::vec(-6i64..=6, 3), i in 0usize..3, k in -3i64..=3) {
        let d = CartanDatum::type_a(3);
        let w = weight(&d, &p);
        let s = w.shift(i, k);
        for j in 0..3 {
            prop_assert_eq!(s.pairing(j), w.pairing(j) + k * d.a(j, i));
        }
        prop_assert_eq!(s.shift(i, -k), w);
    }

    #[test]
    fn gl_map_round_trip(n in 2usize..=5, d in -10i64..=10, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mu: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(-4..=4)).collect();
        if let Some(w) = gl_from_sl(n, d, &mu) {
            prop_assert_eq!(sl_from_gl(&w), mu);
            prop_assert_eq!(w.entries.iter().sum::<i64>(), d);
        }
    }

    #[test]
    fn symbolic_parameters_compatible_far_out(p in prop::collection::vec(-20i64..=20, 2)) {
        let d = a2();
        let ps = params(&d, "c", false);
        let rep = check_compat(&ps, &[weight(&d, &p)]);
        prop_assert!(rep.ok(), "{:?}", rep.violations.first());
    }

    #[test]
    fn grassmannian_at_random_weights(p in prop::collection::vec(-9i64..=9, 2), i in 0usize..2) {
        let d = a2();
        let ps = params(&d, "c", false);
        let r = grassmannian_check(i, &weight(&d, &p), 6, &ps).unwrap();
        prop_assert!(r.ok, "{:?}", r.residual);
    }

    #[test]
    fn diagram_text_round_trip(seed in any::<u64>(), n in 0usize..6) {
        let d = a2();
        let t = diagram(&d, seed, n);
        prop_assert_eq!(parse_term(&d, &format_term(&t, &d)).unwrap(), t);
    }

    #[test]
    fn degree_is_additive_under_stacking(seed in any::<u64>(), n in 1usize..6, cut in any::<prop::sample::Index>()) {
        let d = a2();
        let t = diagram(&d, seed, n);
        let k = cut.index(t.slices.len() + 1);
        let (lo, hi) = prefix(&t, k);
        prop_assert_eq!(lo.then(&hi).unwrap(), t.clone());
        prop_assert_eq!(t.degree(&d), lo.degree(&d) + hi.degree(&d));
    }

    #[test]
    fn image_scalar_is_multiplicative(seed in any::<u64>(), n in 1usize..6, cut in any::<prop::sample::Index>()) {
        let d = a2();
        let f = digamma(params(&d, "c", true), params(&d, "k", false)).unwrap();
        let t = diagram(&d, seed, n);
        let (lo, hi) = prefix(&t, cut.index(t.slices.len() + 1));
        prop_assert_eq!(f.image_scalar(&t).unwrap(), f.image_scalar(&lo).unwrap() * f.image_scalar(&hi).unwrap());
    }

    #[test]
    fn inverse_cancels(seed in any::<u64>(), n in 0usize..6) {
        let d = a2();
        let p = params(&d, "c", false);
        let pp = Arc::new(symbolic_params(&d, &SymbolNames { t: "u".into(), beta: "g".into(), c: "k".into() }, false).unwrap());
        let fs: Vec<GeneratorScaling> = vec![
            digamma(params(&d, "z", true), p.clone()).unwrap(),
            gimel_2cat(p.clone(), pp, 0).unwrap(),
        ];
        let t = diagram(&d, seed, n);
        for f in &fs {
            let round = compose(&inverse(f), f).unwrap();
            prop_assert!(round.image_scalar(&t).unwrap().is_one());
        }
    }

    #[test]
    fn beth_composes_multiplicatively(seed in any::<u64>(), n in 0usize..6) {
        let d = a2();
        let p = params(&d, "c", false);
        let (d1, e1) = (vec![FieldElem::sym("D1"), FieldElem::sym("D2")], vec![FieldElem::sym("E1"), FieldElem::sym("E2")]);
        let f = beth_scaling(p.clone(), d1.clone()).unwrap();
        let g = beth_scaling(f.target.clone(), e1.clone()).unwrap();
        let both = beth_scaling(p, d1.iter().zip(&e1).map(|(a, b)| a * b).collect()).unwrap();
        let t = diagram(&d, seed, n);
        prop_assert_eq!(compose(&g, &f).unwrap().image_scalar(&t).unwrap(), both.image_scalar(&t).unwrap());
    }

    #[test]
    fn local_reduction_preserves_degree(seed in any::<u64>(), n in 1usize..5) {
        let d = a2();
        let p = params(&d, "c", false);
        let t = diagram(&d, seed, n);
        let deg = t.degree(&d);
        let r = reduce_local(&Formal2Mor::from_term(t, FieldElem::one()), &p, 8).unwrap();
        for k in r.degrees(&d) {
            prop_assert_eq!(k, deg);
        }
    }

    #[test]
    fn klr_associativity_on_sums(seed in any::<u64>()) {
        let d = a2();
        let p = params(&d, "c", false);
        let alg = KlrAlgebra::new(&d, &p.q);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.gen_range(1..=3);
        let word: Vec<usize> = (0..m).map(|_| rng.gen_range(0..2)).collect();
        let mut rand_elem = |w: &[usize]| {
            let raw: Vec<(FieldElem, RawMonomial)> = (0..2)
                .map(|_| {
                    // dots only, so the top word stays w and products compose
                    let gens = (0..rng.gen_range(0..3)).map(|_| Gen::X(rng.gen_range(0..m))).collect();
                    (FieldElem::from_i64(rng.gen_range(1..=3)), RawMonomial { word: w.to_vec(), gens })
                })
                .chain(std::iter::once((FieldElem::one(), RawMonomial {
                    word: w.to_vec(),
                    gens: if m > 1 { vec![Gen::S(0), Gen::S(0)] } else { vec![] },
                })))
                .collect();
            alg.normalize_raw(&raw)
        };
        let (a, b, c) = (rand_elem(&word), rand_elem(&word), rand_elem(&word));
        prop_assert_eq!(alg.multiply(&alg.multiply(&a, &b), &c), alg.multiply(&a, &alg.multiply(&b, &c)));
    }

    #[test]
    fn params_json_round_trip(cyclic in any::<bool>(), n in 1u32..=3) {
        let d = CartanDatum::type_a(n);
        let p = params(&d, "c", cyclic);
        let f = ParamsFile::from_params(&p).unwrap();
        let back = ParamsFile::from_json(&f.to_json()).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_params().unwrap(), (*p).clone());
    }
}
