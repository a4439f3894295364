//! Directed local rewriting of diagrams.
//!
//! Terms are first put in interchange-canonical order (a slice that lies
//! strictly left of the slice below it is moved down), then one rule is
//! applied per term and pass. No completeness is claimed.

use std::mem::discriminant;

use super::bubbles::BubbleEval;
use super::relations::{expand_term, klr_steps, template, Coef, EvalMode};
use super::{DiagramTerm, Formal2Mor, GenKind, Letter, OneMor, SliceKind, UcatError};
use crate::field::FieldElem;
use crate::klr::{Gen, KlrAlgebra, KlrTerm, RawMonomial};
use crate::params::ParamSet;

use GenKind::*;

type Steps = Vec<(SliceKind, usize)>;

/// Interchange-canonical order of a slice stack.
pub fn canonicalize(steps: &[(SliceKind, usize)]) -> Steps {
    let mut s = steps.to_vec();
    let cap = s.len() * s.len() + 16;
    for _ in 0..cap {
        let mut changed = false;
        for k in 0..s.len().saturating_sub(1) {
            let (ka, a) = (&s[k].0, s[k].1);
            let (kb, b) = (&s[k + 1].0, s[k + 1].1);
            let out_a = ka.out_width();
            let in_b = kb.in_width();
            let left = b + in_b <= a && !(in_b == 0 && out_a == 0 && b == a);
            if left {
                let na = a + kb.out_width() - in_b;
                let lower = (kb.clone(), b);
                let upper = (ka.clone(), na);
                s[k] = lower;
                s[k + 1] = upper;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    s
}

/// Which rewrite a pattern triggers.
#[derive(Clone, Copy)]
enum Action {
    /// Replace by a single generator on the pattern's input.
    Fold(GenKind),
    /// Delete the pattern.
    Erase,
    Sl2Ef,
    Sl2Fe,
}

struct Pattern {
    steps: Vec<(GenKind, usize)>,
    distinct: bool,
    action: Action,
}

// Color variables.
const A: usize = 0;
const B: usize = 1;

fn patterns() -> Vec<Pattern> {
    let canon = |v: Vec<(GenKind, usize)>| -> Vec<(GenKind, usize)> {
        let s: Steps = v.into_iter().map(|(g, a)| (SliceKind::Gen(g), a)).collect();
        canonicalize(&s)
            .into_iter()
            .map(|(k, a)| match k {
                SliceKind::Gen(g) => (g, a),
                _ => unreachable!(),
            })
            .collect()
    };
    let fold = |g: GenKind, v: Vec<(GenKind, usize)>| Pattern { steps: canon(v), distinct: false, action: Action::Fold(g) };
    let erase = |v: Vec<(GenKind, usize)>, distinct: bool| Pattern { steps: canon(v), distinct, action: Action::Erase };
    let mut out = vec![
        fold(DownCross(A, B), DownCross(A, B).definition().unwrap()),
        fold(
            DownCross(A, B),
            vec![(CupRight(A), 2), (CupRight(B), 3), (UpCross(A, B), 2), (CapRight(B), 1), (CapRight(A), 0)],
        ),
        fold(DownDot(A), DownDot(A).definition().unwrap()),
        fold(DownDot(A), vec![(CupLeft(A), 0), (UpDot(A), 1), (CapLeft(A), 1)]),
        fold(SideCrossLR(A, B), SideCrossLR(A, B).definition().unwrap()),
        fold(SideCrossRL(A, B), SideCrossRL(A, B).definition().unwrap()),
        erase(vec![(CupLeft(A), 1), (CapLeft(A), 0)], false),
        erase(vec![(CupLeft(A), 0), (CapLeft(A), 1)], false),
        erase(vec![(CupRight(A), 0), (CapRight(A), 1)], false),
        erase(vec![(CupRight(A), 1), (CapRight(A), 0)], false),
        erase(vec![(SideCrossRL(B, A), 0), (SideCrossLR(A, B), 0)], true),
        erase(vec![(SideCrossLR(A, B), 0), (SideCrossRL(B, A), 0)], true),
    ];
    out.push(Pattern { steps: vec![(SideCrossLR(A, A), 0), (SideCrossRL(A, A), 0)], distinct: false, action: Action::Sl2Ef });
    out.push(Pattern { steps: vec![(SideCrossRL(A, A), 0), (SideCrossLR(A, A), 0)], distinct: false, action: Action::Sl2Fe });
    out
}

fn bind(vars: &mut [Option<usize>; 2], pat: &[usize], got: &[usize]) -> bool {
    for (&v, &c) in pat.iter().zip(got) {
        match vars[v] {
            Some(x) if x != c => return false,
            Some(_) => {}
            None => vars[v] = Some(c),
        }
    }
    true
}

fn rebind(g: GenKind, vars: &[Option<usize>; 2]) -> GenKind {
    let c = |v: usize| vars[v].unwrap_or(0);
    match g {
        UpDot(a) => UpDot(c(a)),
        DownDot(a) => DownDot(c(a)),
        UpCross(a, b) => UpCross(c(a), c(b)),
        DownCross(a, b) => DownCross(c(a), c(b)),
        SideCrossLR(a, b) => SideCrossLR(c(a), c(b)),
        SideCrossRL(a, b) => SideCrossRL(c(a), c(b)),
        CupLeft(a) => CupLeft(c(a)),
        CupRight(a) => CupRight(c(a)),
        CapLeft(a) => CapLeft(c(a)),
        CapRight(a) => CapRight(c(a)),
    }
}

fn match_at(p: &Pattern, steps: &Steps, s: usize) -> Option<(usize, [Option<usize>; 2])> {
    if s + p.steps.len() > steps.len() {
        return None;
    }
    let mut vars = [None, None];
    let (g0, r0) = p.steps[0];
    let a0 = steps[s].1;
    if a0 < r0 {
        return None;
    }
    let off = a0 - r0;
    for (k, &(pg, rel)) in p.steps.iter().enumerate() {
        let (kind, at) = &steps[s + k];
        let SliceKind::Gen(g) = kind else { return None };
        if discriminant(g) != discriminant(&pg) || *at != rel + off {
            return None;
        }
        if !bind(&mut vars, &pg.colors(), &g.colors()) {
            return None;
        }
    }
    let _ = g0;
    if p.distinct && vars[A] == vars[B] {
        return None;
    }
    Some((off, vars))
}

struct Reducer<'a> {
    p: &'a ParamSet,
    klr: KlrAlgebra,
    ev: BubbleEval<'a>,
    patterns: Vec<Pattern>,
}

/// Rewrite `m` for at most `depth` passes.
pub fn reduce_local(m: &Formal2Mor, p: &ParamSet, depth: usize) -> Result<Formal2Mor, UcatError> {
    let r = Reducer { p, klr: KlrAlgebra::new(&p.datum, &p.q), ev: BubbleEval::new(p), patterns: patterns() };
    let mut cur = m.clone();
    for _ in 0..depth {
        let mut next = Formal2Mor::zero(cur.src.clone(), cur.dst.clone());
        let mut changed = false;
        for (slices, c) in &cur.terms {
            let t = cur.term(slices);
            let canon = DiagramTerm::build(t.src.clone(), &canonicalize(&t.steps()))?;
            match r.step(&canon)? {
                Some(v) => {
                    changed = true;
                    for (k, steps) in v {
                        let nt = DiagramTerm::build(cur.src.clone(), &steps)?;
                        next.add(nt, c * k);
                    }
                }
                None => {
                    changed |= canon.slices != *slices;
                    next.add(canon, c.clone());
                }
            }
        }
        cur = next;
        if !changed {
            break;
        }
    }
    Ok(cur)
}

impl Reducer<'_> {
    /// Apply the first rule that fires, returning the replacement combination.
    fn step(&self, t: &DiagramTerm) -> Result<Option<Vec<(FieldElem, Steps)>>, UcatError> {
        let steps = t.steps();
        // closed bubbles evaluate
        if t.slices.iter().any(|s| matches!(s.kind, SliceKind::Bubble { .. })) {
            let v = expand_term(&t.slices, &self.ev, EvalMode::Full)?;
            return Ok(Some(v.into_iter().map(|(c, s)| (c, s.into_iter().map(|x| (x.kind, x.at)).collect())).collect()));
        }
        if let Some(v) = self.form_bubble(&steps) {
            return Ok(Some(vec![(FieldElem::one(), v)]));
        }
        for s in 0..steps.len() {
            for pat in &self.patterns {
                if let Some((off, vars)) = match_at(pat, &steps, s) {
                    let n = pat.steps.len();
                    let mut out = Vec::new();
                    let splice = |mid: Steps| -> Steps {
                        let mut v = steps[..s].to_vec();
                        v.extend(mid);
                        v.extend_from_slice(&steps[s + n..]);
                        v
                    };
                    match pat.action {
                        Action::Fold(g) => out.push((FieldElem::one(), splice(vec![(SliceKind::Gen(rebind(g, &vars)), off)]))),
                        Action::Erase => out.push((FieldElem::one(), splice(vec![]))),
                        Action::Sl2Ef | Action::Sl2Fe => {
                            let i = vars[A].unwrap();
                            let lam = t.slices[s].region.clone();
                            let name = if matches!(pat.action, Action::Sl2Ef) { "sl2-ef" } else { "sl2-fe" };
                            let tpl = template(name).expect("corpus");
                            let sh = (tpl.shape)(&self.p.datum, &[i], &lam, 0);
                            let beta = Coef::atom(1, super::relations::CoefAtom::Beta(i)).eval(self.p, &lam)?;
                            // id = β·X − β·ΣT  ⇒  X = β⁻¹·id + ΣT
                            out.push((beta.inv(), splice(vec![])));
                            for (c, st) in sh.rhs.iter().skip(1) {
                                let k = c.eval(self.p, &lam)? * -beta.inv();
                                out.push((k, splice(st.iter().map(|(kk, a)| (kk.clone(), a + off)).collect())));
                            }
                        }
                    }
                    return Ok(Some(out));
                }
            }
        }
        Ok(self.klr_run(t, &steps))
    }

    fn form_bubble(&self, steps: &Steps) -> Option<Steps> {
        for s in 0..steps.len() {
            let (SliceKind::Gen(g), k) = &steps[s] else { continue };
            let (i, cw) = match g {
                CupRight(i) => (*i, true),
                CupLeft(i) => (*i, false),
                _ => continue,
            };
            let dot_at = if cw { *k } else { k + 1 };
            let mut e = s + 1;
            while e < steps.len() && steps[e] == (SliceKind::Gen(UpDot(i)), dot_at) {
                e += 1;
            }
            let close = if cw { CapLeft(i) } else { CapRight(i) };
            if e < steps.len() && steps[e] == (SliceKind::Gen(close), *k) {
                let mut v = steps[..s].to_vec();
                v.push((SliceKind::Bubble { i, cw, dots: (e - s - 1) as i64 }, *k));
                v.extend_from_slice(&steps[e + 1..]);
                return Some(v);
            }
        }
        None
    }

    /// Normalize the first non-normal run of upward dots and crossings.
    fn klr_run(&self, t: &DiagramTerm, steps: &Steps) -> Option<Vec<(FieldElem, Steps)>> {
        let mut letters = t.src.letters.clone();
        let mut s = 0;
        while s < steps.len() {
            let is_klr = |k: &SliceKind| matches!(k, SliceKind::Gen(UpDot(_)) | SliceKind::Gen(UpCross(..)));
            if !is_klr(&steps[s].0) {
                apply(&mut letters, &steps[s]);
                s += 1;
                continue;
            }
            let mut e = s;
            let (mut lo, mut hi) = (usize::MAX, 0);
            while e < steps.len() && is_klr(&steps[e].0) {
                lo = lo.min(steps[e].1);
                hi = hi.max(steps[e].1 + steps[e].0.in_width());
                e += 1;
            }
            if letters[lo..hi].iter().all(|l| l.is_up()) {
                let word: Vec<usize> = letters[lo..hi].iter().map(|l| l.color()).collect();
                let gens: Vec<Gen> = steps[s..e]
                    .iter()
                    .map(|(k, a)| match k {
                        SliceKind::Gen(UpDot(_)) => Gen::X(a - lo),
                        _ => Gen::S(a - lo),
                    })
                    .collect();
                let nf = self.klr.normalize(&RawMonomial { word: word.clone(), gens: gens.clone() });
                let unchanged = nf.terms.len() == 1
                    && nf.terms.iter().next().map(|(tm, c)| c.is_one() && tm.gens() == gens).unwrap_or(false);
                if !unchanged {
                    let out = nf
                        .terms
                        .iter()
                        .map(|(tm, c)| {
                            let mut v = steps[..s].to_vec();
                            v.extend(run_steps(&word, tm, lo));
                            v.extend_from_slice(&steps[e..]);
                            (c.clone(), v)
                        })
                        .collect();
                    return Some(out);
                }
            }
            for st in &steps[s..e] {
                apply(&mut letters, st);
            }
            s = e;
        }
        None
    }
}

fn run_steps(word: &[usize], tm: &KlrTerm, lo: usize) -> Steps {
    let ops: Vec<(bool, usize)> = tm
        .gens()
        .into_iter()
        .map(|g| match g {
            Gen::X(p) => (true, p),
            Gen::S(p) => (false, p),
        })
        .collect();
    klr_steps(word, &ops).into_iter().map(|(k, a)| (k, a + lo)).collect()
}

fn apply(letters: &mut Vec<Letter>, (k, at): &(SliceKind, usize)) {
    if let SliceKind::Gen(g) = k {
        let n = g.input().len();
        letters.splice(*at..*at + n, g.output());
    }
}

/// Reduce a single diagram.
pub fn reduce_term(t: &DiagramTerm, p: &ParamSet, depth: usize) -> Result<Formal2Mor, UcatError> {
    reduce_local(&Formal2Mor::from_term(t.clone(), FieldElem::one()), p, depth)
}

/// The identity 2-morphism of a 1-morphism.
pub fn identity(src: OneMor) -> Formal2Mor {
    Formal2Mor::from_term(DiagramTerm::identity(src), FieldElem::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{CartanDatum, Weight};
    use crate::params::{symbolic_params, SymbolNames};
    use crate::ucat::relations::corpus;
    use crate::ucat::text::parse_term;

    fn setup() -> (CartanDatum, ParamSet) {
        let d = CartanDatum::type_a(2);
        let p = symbolic_params(&d, &SymbolNames::default(), false).unwrap();
        (d, p)
    }

    fn wt(d: &CartanDatum, a: i64, b: i64) -> Weight {
        d.weight_from_pairing(&d.coset_bases().unwrap(), &[a, b]).unwrap()
    }

    #[test]
    fn snake_straightens() {
        let (d, p) = setup();
        let t = parse_term(&d, "src: E_1 @ [2,-1]\ncup_l(1)@1; cap_l(1)@0").unwrap();
        let r = reduce_term(&t, &p, 10).unwrap();
        assert_eq!(r, identity(t.src.clone()));
    }

    #[test]
    fn snake_with_spectator_straightens() {
        let (d, p) = setup();
        let t = parse_term(&d, "src: E_1 E_2 @ [0,0]\ncup_l(1)@1; dot(2)@3; cap_l(1)@0").unwrap();
        let r = reduce_term(&t, &p, 10).unwrap();
        let want = parse_term(&d, "src: E_1 E_2 @ [0,0]\ndot(2)@1").unwrap();
        assert_eq!(r, Formal2Mor::from_term(want, FieldElem::one()));
    }

    #[test]
    fn closed_circle_is_cplus() {
        let (d, p) = setup();
        let lam = wt(&d, 1, 0);
        let t = parse_term(&d, "src: 1 @ [1,0]\ncup_r(1)@0; cap_l(1)@0").unwrap();
        let r = reduce_term(&t, &p, 10).unwrap();
        let want = identity(OneMor::identity(lam.clone()));
        assert_eq!(r.ratio_to(&want), Some(p.cplus(0, &lam).unwrap()));
    }

    #[test]
    fn canonical_order_moves_left_slices_down() {
        let (d, _) = setup();
        let t = parse_term(&d, "src: E_1 E_2 @ [0,0]\ndot(2)@1; dot(1)@0").unwrap();
        let c = canonicalize(&t.steps());
        assert_eq!(c[0].1, 0);
        assert_eq!(c[1].1, 1);
    }

    #[test]
    fn sound_on_relation_corpus() {
        let (d, p) = setup();
        for tpl in corpus() {
            for lam in d.weight_window(-2, 2).unwrap() {
                for inst in tpl.instances(&d, &lam) {
                    let (l, r) = inst.sides(&p, EvalMode::Keep).unwrap();
                    let rl = reduce_local(&l, &p, 64).unwrap();
                    let rr = reduce_local(&r, &p, 64).unwrap();
                    assert_eq!(rl, rr, "{}", inst.label(&d));
                }
            }
        }
    }
}
