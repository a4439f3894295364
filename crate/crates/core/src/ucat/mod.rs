//! String diagrams for 2-morphisms of the 2-category 𝒰_{Q,β}(𝔤).
//!
//! A diagram is a sequence of slices read bottom to top. Each slice applies one
//! generator at a strand position of the current 1-morphism and carries the
//! weight of the region immediately to the right of the strands it touches.
//! Letters of a 1-morphism are stored left to right; the rightmost region is
//! the weight λ of the signature.

pub mod bubbles;
pub mod reduce;
pub mod relations;
pub mod text;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::cartan::{CartanDatum, Weight};
use crate::field::FieldElem;
use crate::params::ParamError;

pub use bubbles::{
    bubble_value, eval_bubble, fake_expand, grassmannian_check, BubbleEval, BubbleMono, BubblePoly, BubbleSymbol,
    FakePrefactor, GrassmannReport,
};
pub use reduce::reduce_local;
pub use relations::{corpus, instantiate_relation, Coef, EvalMode, RelationInstance, RelationTemplate};

#[derive(Debug, thiserror::Error)]
pub enum UcatError {
    #[error("slice {index}: {msg}")]
    Malformed { index: usize, msg: String },
    #[error("{0}")]
    Param(#[from] ParamError),
    #[error("bubble is on the real side: {0}")]
    NotFake(String),
    #[error("relation {0} does not apply here")]
    Inapplicable(String),
    #[error("{0}")]
    Parse(String),
}

/// An upward (ℰ_i) or downward (ℱ_i) strand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Letter {
    E(usize),
    F(usize),
}

impl Letter {
    pub fn color(self) -> usize {
        match self {
            Letter::E(i) | Letter::F(i) => i,
        }
    }

    pub fn is_up(self) -> bool {
        matches!(self, Letter::E(_))
    }

    /// Coefficient of α_i picked up when crossing the strand leftwards.
    fn delta(self) -> i64 {
        if self.is_up() {
            1
        } else {
            -1
        }
    }
}

/// A composite of ℰ's and ℱ's ending in 𝟙_λ, with a grading shift.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OneMor {
    pub weight: Weight,
    pub letters: Vec<Letter>,
    pub shift: i64,
}

impl OneMor {
    pub fn new(weight: Weight, letters: Vec<Letter>) -> OneMor {
        OneMor { weight, letters, shift: 0 }
    }

    pub fn identity(weight: Weight) -> OneMor {
        OneMor::new(weight, Vec::new())
    }

    /// Weight of the region at boundary `b` (0 = far left, len = far right).
    pub fn region(&self, b: usize) -> Weight {
        let mut w = self.weight.clone();
        for l in self.letters[b..].iter().rev() {
            w = w.shift(l.color(), l.delta());
        }
        w
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// Generating 2-morphisms. Sideways crossings and downward generators are
/// stored as primitives; their defining composites are given by [`GenKind::definition`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GenKind {
    UpDot(usize),
    DownDot(usize),
    /// ℰ_iℰ_j → ℰ_jℰ_i (bottom-left color i).
    UpCross(usize, usize),
    /// ℱ_iℱ_j → ℱ_jℱ_i.
    DownCross(usize, usize),
    /// ℰ_iℱ_j → ℱ_jℰ_i.
    SideCrossLR(usize, usize),
    /// ℱ_iℰ_j → ℰ_jℱ_i.
    SideCrossRL(usize, usize),
    /// 𝟙 → ℱ_iℰ_i.
    CupLeft(usize),
    /// 𝟙 → ℰ_iℱ_i.
    CupRight(usize),
    /// ℰ_iℱ_i → 𝟙.
    CapLeft(usize),
    /// ℱ_iℰ_i → 𝟙.
    CapRight(usize),
}

use GenKind::*;
use Letter::{E, F};

impl GenKind {
    pub fn input(self) -> Vec<Letter> {
        match self {
            UpDot(i) => vec![E(i)],
            DownDot(i) => vec![F(i)],
            UpCross(i, j) => vec![E(i), E(j)],
            DownCross(i, j) => vec![F(i), F(j)],
            SideCrossLR(i, j) => vec![E(i), F(j)],
            SideCrossRL(i, j) => vec![F(i), E(j)],
            CupLeft(_) | CupRight(_) => vec![],
            CapLeft(i) => vec![E(i), F(i)],
            CapRight(i) => vec![F(i), E(i)],
        }
    }

    pub fn output(self) -> Vec<Letter> {
        match self {
            UpDot(i) => vec![E(i)],
            DownDot(i) => vec![F(i)],
            UpCross(i, j) => vec![E(j), E(i)],
            DownCross(i, j) => vec![F(j), F(i)],
            SideCrossLR(i, j) => vec![F(j), E(i)],
            SideCrossRL(i, j) => vec![E(j), F(i)],
            CupLeft(i) => vec![F(i), E(i)],
            CupRight(i) => vec![E(i), F(i)],
            CapLeft(_) | CapRight(_) => vec![],
        }
    }

    /// Generators with no defining composite.
    pub fn is_primitive(self) -> bool {
        matches!(self, UpDot(_) | UpCross(..) | CupLeft(_) | CupRight(_) | CapLeft(_) | CapRight(_))
    }

    /// Degree at `region` (the weight to the right of the generator).
    pub fn degree(self, datum: &CartanDatum, region: &Weight) -> i64 {
        match self {
            UpDot(_) | DownDot(_) => 2,
            UpCross(i, j) | DownCross(i, j) => -datum.a(i, j),
            SideCrossLR(..) | SideCrossRL(..) => 0,
            CupRight(i) | CapLeft(i) => 1 - region.pairing(i),
            CupLeft(i) | CapRight(i) => 1 + region.pairing(i),
        }
    }

    /// Defining composite of a derived generator, on its own input letters.
    pub fn definition(self) -> Option<Vec<(GenKind, usize)>> {
        Some(match self {
            DownDot(i) => vec![(CupRight(i), 1), (UpDot(i), 1), (CapRight(i), 0)],
            DownCross(i, j) => vec![(CupLeft(j), 0), (CupLeft(i), 1), (UpCross(i, j), 2), (CapLeft(i), 3), (CapLeft(j), 2)],
            SideCrossLR(i, j) => vec![(CupLeft(j), 0), (UpCross(j, i), 1), (CapLeft(j), 2)],
            SideCrossRL(i, j) => vec![(CupRight(i), 2), (UpCross(j, i), 1), (CapRight(i), 0)],
            _ => return None,
        })
    }

    pub fn colors(self) -> Vec<usize> {
        match self {
            UpDot(i) | DownDot(i) | CupLeft(i) | CupRight(i) | CapLeft(i) | CapRight(i) => vec![i],
            UpCross(i, j) | DownCross(i, j) | SideCrossLR(i, j) | SideCrossRL(i, j) => vec![i, j],
        }
    }
}

/// What a slice does: a generator, a closed bubble with a (possibly negative)
/// dot count, or an evaluated monomial in End(𝟙) generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SliceKind {
    Gen(GenKind),
    Bubble { i: usize, cw: bool, dots: i64 },
    Closed(BubbleMono),
}

impl SliceKind {
    fn input(&self) -> Vec<Letter> {
        match self {
            SliceKind::Gen(g) => g.input(),
            _ => vec![],
        }
    }

    fn output(&self) -> Vec<Letter> {
        match self {
            SliceKind::Gen(g) => g.output(),
            _ => vec![],
        }
    }

    pub fn in_width(&self) -> usize {
        self.input().len()
    }

    pub fn out_width(&self) -> usize {
        self.output().len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slice {
    pub kind: SliceKind,
    pub at: usize,
    pub region: Weight,
}

impl Slice {
    pub fn degree(&self, datum: &CartanDatum) -> i64 {
        match &self.kind {
            SliceKind::Gen(g) => g.degree(datum, &self.region),
            SliceKind::Bubble { i, cw, dots } => bubbles::bubble_degree(*i, *cw, *dots, &self.region),
            SliceKind::Closed(m) => m.degree(),
        }
    }
}

/// A single diagram: a source 1-morphism and a stack of slices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagramTerm {
    pub src: OneMor,
    pub dst: OneMor,
    pub slices: Vec<Slice>,
}

impl DiagramTerm {
    pub fn identity(src: OneMor) -> DiagramTerm {
        DiagramTerm { dst: src.clone(), src, slices: Vec::new() }
    }

    /// Build from (kind, position) steps, checking composability and filling regions.
    pub fn build(src: OneMor, steps: &[(SliceKind, usize)]) -> Result<DiagramTerm, UcatError> {
        let mut cur = src.clone();
        let mut slices = Vec::with_capacity(steps.len());
        for (index, (kind, at)) in steps.iter().enumerate() {
            let slice = apply_step(&mut cur, kind.clone(), *at).map_err(|msg| UcatError::Malformed { index, msg })?;
            slices.push(slice);
        }
        Ok(DiagramTerm { src, dst: cur, slices })
    }

    pub fn from_gens(src: OneMor, steps: &[(GenKind, usize)]) -> Result<DiagramTerm, UcatError> {
        let s: Vec<(SliceKind, usize)> = steps.iter().map(|&(g, k)| (SliceKind::Gen(g), k)).collect();
        DiagramTerm::build(src, &s)
    }

    pub fn steps(&self) -> Vec<(SliceKind, usize)> {
        self.slices.iter().map(|s| (s.kind.clone(), s.at)).collect()
    }

    /// Sum of slice degrees.
    pub fn degree(&self, datum: &CartanDatum) -> i64 {
        self.slices.iter().map(|s| s.degree(datum)).sum()
    }

    /// Stack `top` above `self`.
    pub fn then(&self, top: &DiagramTerm) -> Result<DiagramTerm, UcatError> {
        if top.src != self.dst {
            return Err(UcatError::Malformed { index: self.slices.len(), msg: "vertical composition mismatch".into() });
        }
        let mut slices = self.slices.clone();
        slices.extend(top.slices.iter().cloned());
        Ok(DiagramTerm { src: self.src.clone(), dst: top.dst.clone(), slices })
    }

    /// Place `other` to the left of `self` (its rightmost weight must match our leftmost).
    pub fn beside_left(&self, other: &DiagramTerm) -> Result<DiagramTerm, UcatError> {
        let left_w = self.src.region(0);
        if other.src.weight != left_w || self.dst.region(0) != left_w {
            return Err(UcatError::Malformed { index: 0, msg: "horizontal composition mismatch".into() });
        }
        let mut letters = other.src.letters.clone();
        letters.extend(self.src.letters.iter().copied());
        let src = OneMor::new(self.src.weight.clone(), letters);
        let mut steps: Vec<(SliceKind, usize)> = self.steps().into_iter().map(|(k, a)| (k, a + other.src.len())).collect();
        steps.extend(other.steps());
        DiagramTerm::build(src, &steps)
    }
}

fn apply_step(cur: &mut OneMor, kind: SliceKind, at: usize) -> Result<Slice, String> {
    let input = kind.input();
    let output = kind.output();
    if at + input.len() > cur.len() {
        return Err(format!("position {at} out of range for {} strands", cur.len()));
    }
    if cur.letters[at..at + input.len()] != input[..] {
        return Err(format!("expected {:?} at {at}, found {:?}", input, &cur.letters[at..at + input.len()]));
    }
    let region = cur.region(at + input.len());
    cur.letters.splice(at..at + input.len(), output);
    Ok(Slice { kind, at, region })
}

/// A finite linear combination of diagrams sharing source and target.
#[derive(Debug, Clone, PartialEq)]
pub struct Formal2Mor {
    pub src: OneMor,
    pub dst: OneMor,
    pub terms: BTreeMap<Vec<Slice>, FieldElem>,
}

impl Formal2Mor {
    pub fn zero(src: OneMor, dst: OneMor) -> Formal2Mor {
        Formal2Mor { src, dst, terms: BTreeMap::new() }
    }

    pub fn from_term(t: DiagramTerm, c: FieldElem) -> Formal2Mor {
        let mut m = Formal2Mor::zero(t.src.clone(), t.dst.clone());
        m.add(t, c);
        m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&mut self, t: DiagramTerm, c: FieldElem) {
        self.add_slices(t.slices, c);
    }

    pub fn add_slices(&mut self, slices: Vec<Slice>, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        let slices = merge_closed(slices);
        match self.terms.get_mut(&slices) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&slices);
                }
            }
            None => {
                self.terms.insert(slices, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Formal2Mor, c: &FieldElem) {
        for (s, v) in &other.terms {
            self.add_slices(s.clone(), v * c);
        }
    }

    pub fn sub(&self, other: &Formal2Mor) -> Formal2Mor {
        let mut out = self.clone();
        out.add_scaled(other, &-FieldElem::one());
        out
    }

    pub fn term(&self, slices: &[Slice]) -> DiagramTerm {
        DiagramTerm { src: self.src.clone(), dst: self.dst.clone(), slices: slices.to_vec() }
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (DiagramTerm, &FieldElem)> + '_ {
        self.terms.iter().map(|(s, c)| (self.term(s), c))
    }

    /// If `self = γ·other` for a scalar γ, return γ.
    pub fn ratio_to(&self, other: &Formal2Mor) -> Option<FieldElem> {
        if other.is_zero() {
            return self.is_zero().then(FieldElem::one);
        }
        if self.terms.len() != other.terms.len() {
            return None;
        }
        let (k0, v0) = other.terms.iter().next()?;
        let gamma = self.terms.get(k0)? / v0;
        for (k, v) in &other.terms {
            if *self.terms.get(k)? != v * &gamma {
                return None;
            }
        }
        Some(gamma)
    }

    /// Degrees of all terms (empty for the zero morphism).
    pub fn degrees(&self, datum: &CartanDatum) -> Vec<i64> {
        self.terms.keys().map(|s| s.iter().map(|x| x.degree(datum)).sum()).collect()
    }
}

/// Fuse consecutive evaluated bubble slices at the same position.
fn merge_closed(slices: Vec<Slice>) -> Vec<Slice> {
    let mut out: Vec<Slice> = Vec::with_capacity(slices.len());
    for s in slices {
        if let SliceKind::Closed(m) = &s.kind {
            if m.is_one() {
                continue;
            }
            if let Some(prev) = out.last_mut() {
                if prev.at == s.at {
                    if let SliceKind::Closed(pm) = &prev.kind {
                        prev.kind = SliceKind::Closed(pm.mul(m));
                        continue;
                    }
                }
            }
        }
        out.push(s);
    }
    out
}

impl fmt::Display for DiagramTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", text::format_steps(&self.steps(), None))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> CartanDatum {
        CartanDatum::type_a(2)
    }

    fn wt(d: &CartanDatum, p: &[i64]) -> Weight {
        let bases = d.coset_bases().unwrap();
        d.weight_from_pairing(&bases, p).unwrap()
    }

    #[test]
    fn generator_degrees() {
        let d = a2();
        let lam = wt(&d, &[2, 0]);
        assert_eq!(UpDot(0).degree(&d, &lam), 2);
        assert_eq!(UpCross(0, 1).degree(&d, &lam), 1);
        assert_eq!(UpCross(0, 0).degree(&d, &lam), -2);
        assert_eq!(CupLeft(0).degree(&d, &lam), 3);
        assert_eq!(CupRight(0).degree(&d, &lam), -1);
    }

    #[test]
    fn regions_follow_letters() {
        let d = a2();
        let lam = wt(&d, &[1, 1]);
        let m = OneMor::new(lam.clone(), vec![E(0), F(1)]);
        assert_eq!(m.region(2), lam);
        assert_eq!(m.region(1), lam.shift(1, -1));
        assert_eq!(m.region(0), lam.shift(1, -1).shift(0, 1));
    }

    #[test]
    fn definitions_compose_to_their_generator() {
        let d = a2();
        let lam = wt(&d, &[0, 3]);
        for g in [DownDot(0), DownCross(0, 1), SideCrossLR(0, 1), SideCrossRL(1, 0), SideCrossLR(1, 1)] {
            let src = OneMor::new(lam.clone(), g.input());
            let t = DiagramTerm::from_gens(src, &g.definition().unwrap()).unwrap();
            assert_eq!(t.dst.letters, g.output(), "{g:?}");
            assert_eq!(t.degree(&d), g.degree(&d, &lam), "{g:?}");
        }
    }

    #[test]
    fn malformed_slice_is_rejected() {
        let d = a2();
        let src = OneMor::new(wt(&d, &[0, 0]), vec![E(0)]);
        assert!(DiagramTerm::from_gens(src, &[(DownDot(0), 0)]).is_err());
    }

    #[test]
    fn horizontal_composition_shifts_positions() {
        let d = a2();
        let lam = wt(&d, &[1, 0]);
        let right = DiagramTerm::from_gens(OneMor::new(lam.clone(), vec![E(0)]), &[(UpDot(0), 0)]).unwrap();
        let left_w = right.src.region(0);
        let left = DiagramTerm::from_gens(OneMor::new(left_w, vec![F(1)]), &[(DownDot(1), 0)]).unwrap();
        let both = right.beside_left(&left).unwrap();
        assert_eq!(both.src.letters, vec![F(1), E(0)]);
        assert_eq!(both.slices[0].at, 1);
        assert_eq!(both.degree(&d), 4);
    }
}
