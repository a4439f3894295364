//! The defining relations of 𝒰_{Q,β}(𝔤) as data.
//!
//! Every template builds, for a choice of colors, a weight λ (the rightmost
//! region of the source) and an integer variant (dot count, truncation degree
//! or which of two equations), a pair of sides with symbolic coefficients.

use std::fmt;

use serde::Serialize;

use super::bubbles::{dots_for, BubbleEval};
use super::{DiagramTerm, Formal2Mor, GenKind, Letter, OneMor, Slice, SliceKind, UcatError};
use crate::cartan::{CartanDatum, Weight};
use crate::field::FieldElem;
use crate::params::ParamSet;

use GenKind::*;
use Letter::{E, F};

/// A scalar built from β, t and c± at the instance weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefAtom {
    Beta(usize),
    T(usize, usize),
    CPlus(usize),
    CMinus(usize),
}

/// `num · Π atom^exp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coef {
    pub num: i64,
    pub atoms: Vec<(CoefAtom, i64)>,
}

impl Coef {
    pub fn int(num: i64) -> Coef {
        Coef { num, atoms: Vec::new() }
    }

    pub fn one() -> Coef {
        Coef::int(1)
    }

    pub fn atom(num: i64, a: CoefAtom) -> Coef {
        Coef { num, atoms: vec![(a, 1)] }
    }

    pub fn eval(&self, p: &ParamSet, lam: &Weight) -> Result<FieldElem, UcatError> {
        let mut acc = FieldElem::from_i64(self.num);
        for &(a, e) in &self.atoms {
            let v = match a {
                CoefAtom::Beta(i) => p.beta(i, lam)?,
                CoefAtom::T(i, j) => p.t(i, j, lam)?,
                CoefAtom::CPlus(i) => p.cplus(i, lam)?,
                CoefAtom::CMinus(i) => p.cminus(i, lam)?,
            };
            acc = acc * v.pow(e);
        }
        Ok(acc)
    }
}

impl fmt::Display for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![self.num.to_string()];
        for &(a, e) in &self.atoms {
            let s = match a {
                CoefAtom::Beta(i) => format!("b{}", i + 1),
                CoefAtom::T(i, j) => format!("t{}{}", i + 1, j + 1),
                CoefAtom::CPlus(i) => format!("c+{}", i + 1),
                CoefAtom::CMinus(i) => format!("c-{}", i + 1),
            };
            parts.push(if e == 1 { s } else { format!("{s}^{e}") });
        }
        write!(f, "{}", parts.join("*"))
    }
}

type Steps = Vec<(SliceKind, usize)>;

/// Source letters and both sides of a relation, before weights are attached.
pub struct Shape {
    pub src: Vec<Letter>,
    pub lhs: Vec<(Coef, Steps)>,
    pub rhs: Vec<(Coef, Steps)>,
}

/// A defining relation, parametrized by colors, weight and a variant index.
#[derive(Clone, Copy)]
pub struct RelationTemplate {
    pub name: &'static str,
    /// Number of color slots.
    pub arity: usize,
    pub applicable: fn(&CartanDatum, &[usize], &Weight) -> bool,
    pub variants: fn(&[usize], &Weight) -> Vec<i64>,
    pub shape: fn(&CartanDatum, &[usize], &Weight, i64) -> Shape,
}

/// One concrete relation: colors, weight and variant fixed.
#[derive(Debug, Clone)]
pub struct RelationInstance {
    pub relation: &'static str,
    pub colors: Vec<usize>,
    pub weight: Weight,
    pub variant: i64,
    pub src: OneMor,
    pub lhs: Vec<(Coef, DiagramTerm)>,
    pub rhs: Vec<(Coef, DiagramTerm)>,
}

/// How closed bubbles are treated when a relation is instantiated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EvalMode {
    /// Leave every bubble as drawn.
    Keep,
    /// Replace fake bubbles by real ones; real bubbles stay diagrams.
    FakesOnly,
    /// Evaluate every bubble into End(𝟙) generators.
    Full,
}

impl RelationTemplate {
    pub fn instances(&self, datum: &CartanDatum, lam: &Weight) -> Vec<RelationInstance> {
        let mut out = Vec::new();
        for colors in color_tuples(datum.rank(), self.arity) {
            if !(self.applicable)(datum, &colors, lam) {
                continue;
            }
            for v in (self.variants)(&colors, lam) {
                out.push(self.instance(datum, &colors, lam, v).expect("corpus shapes are well formed"));
            }
        }
        out
    }

    pub fn instance(
        &self,
        datum: &CartanDatum,
        colors: &[usize],
        lam: &Weight,
        variant: i64,
    ) -> Result<RelationInstance, UcatError> {
        if colors.len() != self.arity
            || !(self.applicable)(datum, colors, lam)
            || !(self.variants)(colors, lam).contains(&variant)
        {
            return Err(UcatError::Inapplicable(self.name.to_string()));
        }
        let sh = (self.shape)(datum, colors, lam, variant);
        let src = OneMor::new(lam.clone(), sh.src);
        let side = |s: Vec<(Coef, Steps)>| -> Result<Vec<(Coef, DiagramTerm)>, UcatError> {
            s.into_iter().map(|(c, st)| Ok((c, DiagramTerm::build(src.clone(), &st)?))).collect()
        };
        let lhs = side(sh.lhs)?;
        let rhs = side(sh.rhs)?;
        Ok(RelationInstance {
            relation: self.name,
            colors: colors.to_vec(),
            weight: lam.clone(),
            variant,
            src: src.clone(),
            lhs,
            rhs,
        })
    }
}

fn color_tuples(r: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..r).map(move |c| {
                    let mut w = w.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

impl RelationInstance {
    pub fn dst(&self) -> OneMor {
        self.lhs.iter().chain(self.rhs.iter()).next().map(|(_, t)| t.dst.clone()).unwrap_or_else(|| self.src.clone())
    }

    /// Both sides as formal sums in `p`.
    pub fn sides(&self, p: &ParamSet, mode: EvalMode) -> Result<(Formal2Mor, Formal2Mor), UcatError> {
        let ev = BubbleEval::new(p);
        let dst = self.dst();
        let mut l = Formal2Mor::zero(self.src.clone(), dst.clone());
        let mut r = Formal2Mor::zero(self.src.clone(), dst);
        for (c, t) in &self.lhs {
            for (k, s) in expand_term(&t.slices, &ev, mode)? {
                l.add_slices(s, k * c.eval(p, &self.weight)?);
            }
        }
        for (c, t) in &self.rhs {
            for (k, s) in expand_term(&t.slices, &ev, mode)? {
                r.add_slices(s, k * c.eval(p, &self.weight)?);
            }
        }
        Ok((l, r))
    }

    /// lhs − rhs.
    pub fn difference(&self, p: &ParamSet, mode: EvalMode) -> Result<Formal2Mor, UcatError> {
        let (l, r) = self.sides(p, mode)?;
        Ok(l.sub(&r))
    }

    pub fn label(&self, datum: &CartanDatum) -> String {
        let c: Vec<String> = self.colors.iter().map(|&i| datum.label(i).to_string()).collect();
        format!("{}({}) @ {} #{}", self.relation, c.join(","), self.weight, self.variant)
    }
}

/// Instantiate one relation in `p`.
pub fn instantiate_relation(
    r: &RelationTemplate,
    colors: &[usize],
    lam: &Weight,
    variant: i64,
    p: &ParamSet,
) -> Result<(Formal2Mor, Formal2Mor), UcatError> {
    r.instance(&p.datum, colors, lam, variant)?.sides(p, EvalMode::Full)
}

/// Expand the bubble slices of a diagram into a combination of diagrams.
pub fn expand_term(
    slices: &[Slice],
    ev: &BubbleEval<'_>,
    mode: EvalMode,
) -> Result<Vec<(FieldElem, Vec<Slice>)>, UcatError> {
    let mut acc: Vec<(FieldElem, Vec<Slice>)> = vec![(FieldElem::one(), Vec::new())];
    for s in slices {
        let (i, cw, dots) = match &s.kind {
            SliceKind::Bubble { i, cw, dots } if mode == EvalMode::Full || (mode == EvalMode::FakesOnly && *dots < 0) => {
                (*i, *cw, *dots)
            }
            _ => {
                for (_, v) in acc.iter_mut() {
                    v.push(s.clone());
                }
                continue;
            }
        };
        let poly = ev.dotted(i, &s.region, cw, dots)?;
        let mut next = Vec::with_capacity(acc.len() * poly.terms.len());
        for (c, v) in &acc {
            for (m, k) in &poly.terms {
                let mut w = v.clone();
                if !m.is_one() {
                    if mode == EvalMode::Full {
                        w.push(Slice { kind: SliceKind::Closed(m.clone()), at: s.at, region: s.region.clone() });
                    } else {
                        for sym in m.factors() {
                            let d = dots_for(sym.i, sym.cw, sym.r as i64, &s.region);
                            w.push(Slice {
                                kind: SliceKind::Bubble { i: sym.i, cw: sym.cw, dots: d },
                                at: s.at,
                                region: s.region.clone(),
                            });
                        }
                    }
                }
                next.push((c * k, w));
            }
        }
        acc = next;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Shapes

fn g(k: GenKind, at: usize) -> (SliceKind, usize) {
    (SliceKind::Gen(k), at)
}

fn gens(v: &[(GenKind, usize)]) -> Steps {
    v.iter().map(|&(k, a)| g(k, a)).collect()
}

fn bubble(i: usize, cw: bool, dots: i64) -> (SliceKind, usize) {
    (SliceKind::Bubble { i, cw, dots }, 0)
}

/// KLR generators on an upward word, bottom to top: `(true, p)` is a dot on
/// strand p and `(false, s)` a crossing of strands s, s+1.
pub fn klr_steps(word: &[usize], ops: &[(bool, usize)]) -> Steps {
    let mut w = word.to_vec();
    let mut out = Vec::new();
    for &(dot, p) in ops {
        if dot {
            out.push(g(UpDot(w[p]), p));
        } else {
            out.push(g(UpCross(w[p], w[p + 1]), p));
            w.swap(p, p + 1);
        }
    }
    out
}

const X0: (bool, usize) = (true, 0);
const X1: (bool, usize) = (true, 1);
const S0: (bool, usize) = (false, 0);
const S1: (bool, usize) = (false, 1);

fn always(_: &CartanDatum, _: &[usize], _: &Weight) -> bool {
    true
}

fn single(_: &[usize], _: &Weight) -> Vec<i64> {
    vec![0]
}

fn two(_: &[usize], _: &Weight) -> Vec<i64> {
    vec![0, 1]
}

fn distinct(_: &CartanDatum, c: &[usize], _: &Weight) -> bool {
    c[0] != c[1]
}

fn ident() -> Vec<(Coef, Steps)> {
    vec![(Coef::one(), Vec::new())]
}

fn up(c: &[usize]) -> Vec<Letter> {
    c.iter().map(|&i| E(i)).collect()
}

fn sl2_ef(_: &CartanDatum, c: &[usize], lam: &Weight, _: i64) -> Shape {
    let i = c[0];
    let li = lam.pairing(i);
    let mut rhs = vec![(Coef::atom(1, CoefAtom::Beta(i)), gens(&[(SideCrossLR(i, i), 0), (SideCrossRL(i, i), 0)]))];
    for (f1, f2, f3) in triples(li - 1) {
        let mut st: Steps = vec![g(DownDot(i), 1); f1 as usize];
        st.push(g(CapLeft(i), 0));
        st.push(bubble(i, false, -li - 1 + f2));
        st.push(g(CupRight(i), 0));
        st.extend(vec![g(DownDot(i), 1); f3 as usize]);
        rhs.push((Coef::atom(-1, CoefAtom::Beta(i)), st));
    }
    Shape { src: vec![E(i), F(i)], lhs: ident(), rhs }
}

fn sl2_fe(_: &CartanDatum, c: &[usize], lam: &Weight, _: i64) -> Shape {
    let i = c[0];
    let li = lam.pairing(i);
    let mut rhs = vec![(Coef::atom(1, CoefAtom::Beta(i)), gens(&[(SideCrossRL(i, i), 0), (SideCrossLR(i, i), 0)]))];
    for (f1, f2, f3) in triples(-li - 1) {
        let mut st: Steps = vec![g(UpDot(i), 1); f1 as usize];
        st.push(g(CapRight(i), 0));
        st.push(bubble(i, true, li - 1 + f2));
        st.push(g(CupLeft(i), 0));
        st.extend(vec![g(UpDot(i), 1); f3 as usize]);
        rhs.push((Coef::atom(-1, CoefAtom::Beta(i)), st));
    }
    Shape { src: vec![F(i), E(i)], lhs: ident(), rhs }
}

/// (f1, f2, f3) ≥ 0 with f1 + f2 + f3 = n, in lexicographic order.
pub fn triples(n: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    for f1 in 0..=n {
        for f2 in 0..=n - f1 {
            out.push((f1, f2, n - f1 - f2));
        }
    }
    out
}

fn grassmann_degrees(c: &[usize], lam: &Weight) -> Vec<i64> {
    (0..=lam.pairing(c[0]).abs() + 2).collect()
}

/// All 22 relation templates, in a fixed order.
pub fn corpus() -> Vec<RelationTemplate> {
    vec![
        RelationTemplate {
            name: "biadjoint-1a",
            arity: 1,
            applicable: always,
            variants: single,
            shape: |_, c, _, _| Shape {
                src: vec![E(c[0])],
                lhs: vec![(Coef::one(), gens(&[(CupLeft(c[0]), 1), (CapLeft(c[0]), 0)]))],
                rhs: ident(),
            },
        },
        RelationTemplate {
            name: "biadjoint-1b",
            arity: 1,
            applicable: always,
            variants: single,
            shape: |_, c, _, _| Shape {
                src: vec![F(c[0])],
                lhs: vec![(Coef::one(), gens(&[(CupLeft(c[0]), 0), (CapLeft(c[0]), 1)]))],
                rhs: ident(),
            },
        },
        RelationTemplate {
            name: "biadjoint-2a",
            arity: 1,
            applicable: always,
            variants: single,
            shape: |_, c, _, _| Shape {
                src: vec![E(c[0])],
                lhs: vec![(Coef::one(), gens(&[(CupRight(c[0]), 0), (CapRight(c[0]), 1)]))],
                rhs: ident(),
            },
        },
        RelationTemplate {
            name: "biadjoint-2b",
            arity: 1,
            applicable: always,
            variants: single,
            shape: |_, c, _, _| Shape {
                src: vec![F(c[0])],
                lhs: vec![(Coef::one(), gens(&[(CupRight(c[0]), 1), (CapRight(c[0]), 0)]))],
                rhs: ident(),
            },
        },
        RelationTemplate {
            name: "dot-cyclicity",
            arity: 1,
            applicable: always,
            variants: single,
            shape: |_, c, _, _| {
                let i = c[0];
                Shape {
                    src: vec![F(i)],
                    lhs: vec![(Coef::one(), gens(&DownDot(i).definition().unwrap()))],
                    rhs: vec![(Coef::one(), gens(&[(CupLeft(i), 0), (UpDot(i), 1), (CapLeft(i), 1)]))],
                }
            },
        },
        RelationTemplate {
            name: "crossing-cyclicity",
            arity: 2,
            applicable: always,
            variants: single,
            shape: |_, c, _, _| {
                let (i, j) = (c[0], c[1]);
                Shape {
                    src: vec![F(i), F(j)],
                    lhs: vec![(Coef::one(), gens(&DownCross(i, j).definition().unwrap()))],
                    rhs: vec![(
                        Coef::one(),
                        gens(&[(CupRight(i), 2), (CupRight(j), 3), (UpCross(i, j), 2), (CapRight(j), 1), (CapRight(i), 0)]),
                    )],
                }
            },
        },
        RelationTemplate {
            name: "sideways-lr",
            arity: 2,
            applicable: always,
            variants: single,
            shape: |_, c, _, _| {
                let k = SideCrossLR(c[0], c[1]);
                Shape {
                    src: k.input(),
                    lhs: vec![(Coef::one(), gens(&[(k, 0)]))],
                    rhs: vec![(Coef::one(), gens(&k.definition().unwrap()))],
                }
            },
        },
        RelationTemplate {
            name: "sideways-rl",
            arity: 2,
            applicable: always,
            variants: single,
            shape: |_, c, _, _| {
                let k = SideCrossRL(c[0], c[1]);
                Shape {
                    src: k.input(),
                    lhs: vec![(Coef::one(), gens(&[(k, 0)]))],
                    rhs: vec![(Coef::one(), gens(&k.definition().unwrap()))],
                }
            },
        },
        RelationTemplate {
            name: "klr-quadratic-same",
            arity: 1,
            applicable: always,
            variants: single,
            shape: |_, c, _, _| {
                let w = [c[0], c[0]];
                Shape { src: up(&w), lhs: vec![(Coef::one(), klr_steps(&w, &[S0, S0]))], rhs: vec![] }
            },
        },
        RelationTemplate {
            name: "klr-quadratic-distant",
            arity: 2,
            applicable: |d, c, _| c[0] != c[1] && d.a(c[0], c[1]) == 0,
            variants: single,
            shape: |_, c, _, _| Shape {
                src: up(c),
                lhs: vec![(Coef::one(), klr_steps(c, &[S0, S0]))],
                rhs: vec![(Coef::atom(1, CoefAtom::T(c[0], c[1])), vec![])],
            },
        },
        RelationTemplate {
            name: "klr-quadratic-adjacent",
            arity: 2,
            applicable: |d, c, _| d.a(c[0], c[1]) == -1,
            variants: single,
            shape: |_, c, _, _| Shape {
                src: up(c),
                lhs: vec![(Coef::one(), klr_steps(c, &[S0, S0]))],
                rhs: vec![
                    (Coef::atom(1, CoefAtom::T(c[0], c[1])), klr_steps(c, &[X0])),
                    (Coef::atom(1, CoefAtom::T(c[1], c[0])), klr_steps(c, &[X1])),
                ],
            },
        },
        RelationTemplate {
            name: "dot-slide-same",
            arity: 1,
            applicable: always,
            variants: two,
            shape: |_, c, _, v| {
                let w = [c[0], c[0]];
                // x₂ψ = ψx₁ − 1 and x₁ψ = ψx₂ + 1 (diagrams read bottom to top)
                let (top, bottom, sign) = if v == 0 { (X1, X0, -1) } else { (X0, X1, 1) };
                Shape {
                    src: up(&w),
                    lhs: vec![(Coef::one(), klr_steps(&w, &[S0, top]))],
                    rhs: vec![(Coef::one(), klr_steps(&w, &[bottom, S0])), (Coef::int(sign), vec![])],
                }
            },
        },
        RelationTemplate {
            name: "dot-slide-distinct",
            arity: 2,
            applicable: distinct,
            variants: two,
            shape: |_, c, _, v| {
                let (top, bottom) = if v == 0 { (X1, X0) } else { (X0, X1) };
                Shape {
                    src: up(c),
                    lhs: vec![(Coef::one(), klr_steps(c, &[S0, top]))],
                    rhs: vec![(Coef::one(), klr_steps(c, &[bottom, S0]))],
                }
            },
        },
        RelationTemplate {
            name: "cubic-braid",
            arity: 3,
            applicable: |d, c, _| !(c[0] == c[2] && d.a(c[0], c[1]) == -1),
            variants: single,
            shape: |_, c, _, _| Shape {
                src: up(c),
                lhs: vec![(Coef::one(), klr_steps(c, &[S0, S1, S0]))],
                rhs: vec![(Coef::one(), klr_steps(c, &[S1, S0, S1]))],
            },
        },
        RelationTemplate {
            name: "cubic-adjacent",
            arity: 2,
            applicable: |d, c, _| d.a(c[0], c[1]) == -1,
            variants: single,
            shape: |_, c, _, _| {
                let w = [c[0], c[1], c[0]];
                Shape {
                    src: up(&w),
                    lhs: vec![(Coef::one(), klr_steps(&w, &[S0, S1, S0]))],
                    rhs: vec![
                        (Coef::one(), klr_steps(&w, &[S1, S0, S1])),
                        (Coef::atom(1, CoefAtom::T(c[0], c[1])), vec![]),
                    ],
                }
            },
        },
        RelationTemplate {
            name: "mixed-fe",
            arity: 2,
            applicable: distinct,
            variants: single,
            shape: |_, c, _, _| {
                let (i, j) = (c[0], c[1]);
                Shape {
                    src: vec![F(j), E(i)],
                    lhs: vec![(Coef::one(), gens(&[(SideCrossRL(j, i), 0), (SideCrossLR(i, j), 0)]))],
                    rhs: ident(),
                }
            },
        },
        RelationTemplate {
            name: "mixed-ef",
            arity: 2,
            applicable: distinct,
            variants: single,
            shape: |_, c, _, _| {
                let (i, j) = (c[0], c[1]);
                Shape {
                    src: vec![E(i), F(j)],
                    lhs: vec![(Coef::one(), gens(&[(SideCrossLR(i, j), 0), (SideCrossRL(j, i), 0)]))],
                    rhs: ident(),
                }
            },
        },
        RelationTemplate {
            name: "bubble-cw",
            arity: 1,
            applicable: |_, c, lam| lam.pairing(c[0]) >= 1,
            variants: |c, lam| (0..lam.pairing(c[0])).collect(),
            shape: |_, c, lam, m| {
                let i = c[0];
                let rhs = if m == lam.pairing(i) - 1 { vec![(Coef::atom(1, CoefAtom::CPlus(i)), vec![])] } else { vec![] };
                Shape { src: vec![], lhs: vec![(Coef::one(), vec![bubble(i, true, m)])], rhs }
            },
        },
        RelationTemplate {
            name: "bubble-ccw",
            arity: 1,
            applicable: |_, c, lam| lam.pairing(c[0]) <= -1,
            variants: |c, lam| (0..-lam.pairing(c[0])).collect(),
            shape: |_, c, lam, m| {
                let i = c[0];
                let rhs = if m == -lam.pairing(i) - 1 { vec![(Coef::atom(1, CoefAtom::CMinus(i)), vec![])] } else { vec![] };
                Shape { src: vec![], lhs: vec![(Coef::one(), vec![bubble(i, false, m)])], rhs }
            },
        },
        RelationTemplate {
            name: "grassmannian",
            arity: 1,
            applicable: always,
            variants: grassmann_degrees,
            shape: |_, c, lam, k| {
                let i = c[0];
                let li = lam.pairing(i);
                let lhs = (0..=k)
                    .map(|x| (Coef::one(), vec![bubble(i, true, li - 1 + x), bubble(i, false, -li - 1 + k - x)]))
                    .collect();
                let rhs = if k == 0 { vec![(Coef { num: -1, atoms: vec![(CoefAtom::Beta(i), -1)] }, vec![])] } else { vec![] };
                Shape { src: vec![], lhs, rhs }
            },
        },
        RelationTemplate { name: "sl2-ef", arity: 1, applicable: always, variants: single, shape: sl2_ef },
        RelationTemplate { name: "sl2-fe", arity: 1, applicable: always, variants: single, shape: sl2_fe },
    ]
}

pub fn template(name: &str) -> Option<RelationTemplate> {
    corpus().into_iter().find(|t| t.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{symbolic_params, SymbolNames};

    fn setup() -> (CartanDatum, ParamSet, Vec<Weight>) {
        let d = CartanDatum::type_a(2);
        let p = symbolic_params(&d, &SymbolNames::default(), false).unwrap();
        let w = d.weight_window(-3, 3).unwrap();
        (d, p, w)
    }

    #[test]
    fn corpus_checklist() {
        let names: Vec<&str> = corpus().iter().map(|t| t.name).collect();
        assert_eq!(names.len(), 22);
        assert_eq!(names.iter().filter(|n| n.starts_with("biadjoint")).count(), 4);
        assert_eq!(names.iter().filter(|n| n.starts_with("klr-quadratic")).count(), 3);
        assert_eq!(names.iter().filter(|n| n.starts_with("sl2")).count(), 2);
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 22);
    }

    #[test]
    fn degree_homogeneity() {
        let (d, _, ws) = setup();
        for t in corpus() {
            for lam in &ws {
                for inst in t.instances(&d, lam) {
                    let mut degs: Vec<i64> = inst.lhs.iter().chain(inst.rhs.iter()).map(|(_, x)| x.degree(&d)).collect();
                    degs.dedup();
                    assert!(degs.len() <= 1, "{}: {:?}", inst.label(&d), degs);
                    for (_, x) in inst.lhs.iter().chain(inst.rhs.iter()) {
                        assert_eq!(x.dst, inst.dst(), "{}", inst.label(&d));
                    }
                }
            }
        }
    }

    #[test]
    fn sl2_at_lambda_one_has_one_curl() {
        let (d, p, _) = setup();
        let lam = d.weight_from_pairing(&d.coset_bases().unwrap(), &[1, 0]).unwrap();
        let inst = template("sl2-ef").unwrap().instance(&d, &[0], &lam, 0).unwrap();
        assert_eq!(inst.rhs.len(), 2);
        let c = inst.rhs[1].0.eval(&p, &lam).unwrap();
        assert_eq!(c, -p.beta(0, &lam).unwrap());
    }

    #[test]
    fn mixed_rhs_is_identity() {
        let (d, p, _) = setup();
        let lam = d.zero_weight();
        let (_, r) = instantiate_relation(&template("mixed-ef").unwrap(), &[0, 1], &lam, 0, &p).unwrap();
        assert_eq!(r.terms.len(), 1);
        let (k, c) = r.terms.iter().next().unwrap();
        assert!(k.is_empty() && c.is_one());
    }

    #[test]
    fn bubble_relations_hold_after_evaluation() {
        let (d, p, ws) = setup();
        for name in ["bubble-cw", "bubble-ccw", "grassmannian"] {
            let t = template(name).unwrap();
            for lam in &ws {
                for inst in t.instances(&d, lam) {
                    assert!(inst.difference(&p, EvalMode::Full).unwrap().is_zero(), "{}", inst.label(&d));
                }
            }
        }
    }

    #[test]
    fn inapplicable_instance_is_an_error() {
        let (d, _, _) = setup();
        let lam = d.zero_weight();
        assert!(template("bubble-cw").unwrap().instance(&d, &[0], &lam, 0).is_err());
        assert!(template("mixed-ef").unwrap().instance(&d, &[1, 1], &lam, 0).is_err());
    }
}
