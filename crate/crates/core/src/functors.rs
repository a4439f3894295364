//! Rescaling 2-functors as scalar tables on generators.
//!
//! Every functor here is the identity on objects, 1-morphisms and diagram
//! shapes; it multiplies each generating 2-morphism by an invertible scalar
//! depending on the generator and the weight of the region to its right.
//! Derived generators (downward dots and crossings, sideways crossings)
//! take the product over their defining composites.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cartan::Weight;
use crate::field::FieldElem;
use crate::klr::GimelKlr;
use crate::params::{nilhecke_rescale, ParamError, ParamSet, ParamsFile};
use crate::ucat::{DiagramTerm, GenKind, OneMor, Slice, SliceKind, UcatError};

use GenKind::*;

#[derive(Debug, thiserror::Error)]
pub enum FunctorError {
    #[error("source parameters are not the cyclic specialization (all β = −1)")]
    NotCyclic,
    #[error("parameter mismatch: {0}")]
    Mismatch(String),
    #[error("{0}")]
    Param(#[from] ParamError),
    #[error("{0}")]
    Diagram(#[from] UcatError),
    #[error("unknown branch {0:?}")]
    Branch(String),
    #[error("functor spec: {0}")]
    Spec(String),
}

#[derive(Debug, Clone)]
enum Rule {
    Identity,
    Digamma,
    M,
    Beth { d: Vec<FieldElem> },
    Gimel { g: Arc<GimelKlr> },
    /// `outer ∘ inner`.
    Composite(Box<GeneratorScaling>, Box<GeneratorScaling>),
    Inverse(Box<GeneratorScaling>),
}

/// A rescaling 2-functor between two parameter sets over the same datum.
#[derive(Debug, Clone)]
pub struct GeneratorScaling {
    pub name: String,
    pub source: Arc<ParamSet>,
    pub target: Arc<ParamSet>,
    rule: Rule,
    flip: Option<String>,
}

fn low(lam: &Weight, i: usize) -> bool {
    lam.pairing(i).rem_euclid(4) < 2
}

impl GeneratorScaling {
    pub fn identity(p: Arc<ParamSet>) -> GeneratorScaling {
        GeneratorScaling { name: "identity".into(), source: p.clone(), target: p, rule: Rule::Identity, flip: None }
    }

    /// Object map (identity for every functor in this crate).
    pub fn map_object(&self, w: &Weight) -> Weight {
        w.clone()
    }

    /// Whether generator scalars branch on λ_i mod 4.
    pub fn branches_mod4(&self) -> bool {
        match &self.rule {
            Rule::Digamma => true,
            Rule::Composite(a, b) => a.branches_mod4() || b.branches_mod4(),
            Rule::Inverse(f) => f.branches_mod4(),
            _ => false,
        }
    }

    /// Branches that a mutation test may flip.
    pub fn branches(&self) -> Vec<&'static str> {
        match &self.rule {
            Rule::Digamma => vec![
                "cap_left:01",
                "cap_left:23",
                "cap_right:01",
                "cap_right:23",
                "cup_right:01",
                "cup_right:23",
                "cup_left:01",
                "cup_left:23",
            ],
            Rule::Beth { .. } => vec!["dot", "cross_same"],
            Rule::Gimel { .. } => vec!["dot", "cross_same", "cross_ordered", "cap_left", "cup_left"],
            _ => vec![],
        }
    }

    /// The same functor with one scalar branch deliberately altered.
    pub fn flipped(&self, branch: &str) -> Result<GeneratorScaling, FunctorError> {
        if !self.branches().contains(&branch) {
            return Err(FunctorError::Branch(branch.to_string()));
        }
        let mut f = self.clone();
        f.flip = Some(branch.to_string());
        f.name = format!("{}[flip {}]", self.name, branch);
        Ok(f)
    }

    fn flipped_on(&self, b: &str) -> bool {
        self.flip.as_deref() == Some(b)
    }

    /// Scalar assigned directly to a primitive generator.
    fn primitive(&self, g: GenKind, lam: &Weight) -> Result<FieldElem, FunctorError> {
        let one = FieldElem::one;
        Ok(match &self.rule {
            Rule::Identity => one(),
            Rule::Digamma => {
                let (s, t) = (&self.source, &self.target);
                // `key` names the branch used at this class; a flip swaps to the other class's formula.
                let pick = |name: &str, i: usize| -> bool {
                    let l = low(lam, i);
                    let key = if l { format!("{name}:01") } else { format!("{name}:23") };
                    l != self.flipped_on(&key)
                };
                match g {
                    CapLeft(i) => {
                        let c = s.cplus(i, lam)?;
                        if pick("cap_left", i) {
                            c / t.cplus(i, lam)?
                        } else {
                            c
                        }
                    }
                    CapRight(i) => {
                        if pick("cap_right", i) {
                            t.cminus(i, lam)?.inv()
                        } else {
                            one()
                        }
                    }
                    CupRight(i) => {
                        if pick("cup_right", i) {
                            one()
                        } else {
                            t.cplus(i, lam)?.inv()
                        }
                    }
                    CupLeft(i) => {
                        let c = s.cplus(i, lam)?.inv();
                        if pick("cup_left", i) {
                            c
                        } else {
                            c / t.cminus(i, lam)?
                        }
                    }
                    _ => one(),
                }
            }
            Rule::M => match g {
                CapLeft(i) => self.source.cplus(i, lam)?,
                CupLeft(i) => self.source.cplus(i, lam)?.inv(),
                _ => one(),
            },
            Rule::Beth { d } => match g {
                UpDot(i) if !self.flipped_on("dot") => d[i].clone(),
                UpCross(i, j) if i == j && !self.flipped_on("cross_same") => d[i].inv(),
                _ => one(),
            },
            Rule::Gimel { g: gk } => {
                let (s, t) = (&self.source, &self.target);
                match g {
                    UpDot(i) => {
                        if self.flipped_on("dot") {
                            one()
                        } else {
                            gk.d[i].clone()
                        }
                    }
                    UpCross(i, j) => {
                        if (i == j && self.flipped_on("cross_same"))
                            || (i != j && gk.precedes(i, j) && self.flipped_on("cross_ordered"))
                        {
                            one()
                        } else {
                            gk.cross_scale(i, j).clone()
                        }
                    }
                    CapLeft(i) if !self.flipped_on("cap_left") => {
                        gk.d[i].pow(1 - lam.pairing(i)) * s.cplus(i, lam)? / t.cplus(i, lam)?
                    }
                    CupLeft(i) if !self.flipped_on("cup_left") => {
                        let up = lam.shift(i, 1);
                        gk.d[i].pow(lam.pairing(i) + 1) * t.cplus(i, &up)? / s.cplus(i, &up)?
                    }
                    _ => one(),
                }
            }
            Rule::Composite(outer, inner) => outer.scale(g, lam)? * inner.scale(g, lam)?,
            Rule::Inverse(f) => f.scale(g, lam)?.inv(),
        })
    }

    /// Scalar of any generator at region `lam`.
    pub fn scale(&self, g: GenKind, lam: &Weight) -> Result<FieldElem, FunctorError> {
        if g.is_primitive() {
            return self.primitive(g, lam);
        }
        let def = g.definition().expect("derived generators have definitions");
        let t = DiagramTerm::from_gens(OneMor::new(lam.clone(), g.input()), &def)?;
        self.image_scalar(&t)
    }

    /// Scalar of one slice; real bubbles use their cup, dots and cap.
    pub fn slice_scale(&self, s: &Slice) -> Result<FieldElem, FunctorError> {
        match &s.kind {
            SliceKind::Gen(g) => self.scale(*g, &s.region),
            SliceKind::Bubble { i, cw, dots } => {
                if *dots < 0 {
                    return Err(FunctorError::Diagram(UcatError::Parse("fake bubbles have no image; expand first".into())));
                }
                Ok(self.bubble_scale(*i, *cw, *dots, &s.region)?)
            }
            SliceKind::Closed(_) => {
                Err(FunctorError::Diagram(UcatError::Parse("evaluated bubbles have no image; map diagrams".into())))
            }
        }
    }

    /// Scalar on the real bubble with `dots` dots in region `lam`.
    pub fn bubble_scale(&self, i: usize, cw: bool, dots: i64, lam: &Weight) -> Result<FieldElem, FunctorError> {
        let n = dots.max(0) as usize;
        let mut steps = Vec::with_capacity(n + 2);
        if cw {
            steps.push((CupRight(i), 0));
            steps.extend(std::iter::repeat((UpDot(i), 0)).take(n));
            steps.push((CapLeft(i), 0));
        } else {
            steps.push((CupLeft(i), 0));
            steps.extend(std::iter::repeat((UpDot(i), 1)).take(n));
            steps.push((CapRight(i), 0));
        }
        let t = DiagramTerm::from_gens(OneMor::identity(lam.clone()), &steps)?;
        self.image_scalar(&t)
    }

    /// Product of the slice scalars.
    pub fn image_scalar(&self, t: &DiagramTerm) -> Result<FieldElem, FunctorError> {
        let mut acc = FieldElem::one();
        for s in &t.slices {
            acc = acc * self.slice_scale(s)?;
        }
        Ok(acc)
    }
}

/// ϝ : 𝒰_Q^cyc → 𝒰_{Q,β}.
pub fn digamma(cyc: Arc<ParamSet>, target: Arc<ParamSet>) -> Result<GeneratorScaling, FunctorError> {
    if !cyc.is_cyclic() {
        return Err(FunctorError::NotCyclic);
    }
    same_datum(&cyc, &target)?;
    let r = cyc.datum.rank();
    for i in 0..r {
        for j in 0..r {
            if i != j && cyc.q.t_off(i, j) != target.q.t_off(i, j) {
                return Err(FunctorError::Mismatch(format!("t_{}{} differs", cyc.datum.label(i), cyc.datum.label(j))));
            }
        }
    }
    Ok(GeneratorScaling { name: "digamma".into(), source: cyc, target, rule: Rule::Digamma, flip: None })
}

/// The scalar assignment ℳ out of the cyclic form (recorded only; its target
/// relations are not checked here, so the target is the source again).
pub fn m_scaling(cyc: Arc<ParamSet>) -> Result<GeneratorScaling, FunctorError> {
    if !cyc.is_cyclic() {
        return Err(FunctorError::NotCyclic);
    }
    Ok(GeneratorScaling { name: "m".into(), source: cyc.clone(), target: cyc, rule: Rule::M, flip: None })
}

/// ℶ : 𝒰_{Q,β} → 𝒰_{Q̂,β̂} rescaling i-dots by D_i and ii-crossings by D_i⁻¹.
pub fn beth_scaling(p: Arc<ParamSet>, d: Vec<FieldElem>) -> Result<GeneratorScaling, FunctorError> {
    if d.len() != p.datum.rank() {
        return Err(FunctorError::Mismatch("D has the wrong length".into()));
    }
    let target = Arc::new(nilhecke_rescale(&p, &d)?);
    Ok(GeneratorScaling { name: "beth".into(), source: p, target, rule: Rule::Beth { d }, flip: None })
}

/// ℷ : 𝒰_{Q,β} → 𝒰_{Q′,β′} for a tree rooted at `root`.
pub fn gimel_2cat(p: Arc<ParamSet>, pp: Arc<ParamSet>, root: usize) -> Result<GeneratorScaling, FunctorError> {
    same_datum(&p, &pp)?;
    if !p.datum.is_tree() {
        return Err(FunctorError::Mismatch("graph is not a tree".into()));
    }
    let g = GimelKlr::new(&p.datum, &p.q, &pp.q, root)?;
    Ok(GeneratorScaling { name: "gimel".into(), source: p, target: pp, rule: Rule::Gimel { g: Arc::new(g) }, flip: None })
}

fn same_datum(a: &ParamSet, b: &ParamSet) -> Result<(), FunctorError> {
    if a.datum != b.datum {
        return Err(FunctorError::Mismatch("different Cartan data".into()));
    }
    Ok(())
}

/// `f ∘ g` (apply g first).
pub fn compose(f: &GeneratorScaling, g: &GeneratorScaling) -> Result<GeneratorScaling, FunctorError> {
    if *g.target != *f.source {
        return Err(FunctorError::Mismatch(format!("target of {} is not the source of {}", g.name, f.name)));
    }
    Ok(GeneratorScaling {
        name: format!("{}∘{}", f.name, g.name),
        source: g.source.clone(),
        target: f.target.clone(),
        rule: Rule::Composite(Box::new(f.clone()), Box::new(g.clone())),
        flip: None,
    })
}

/// Pointwise inverse with source and target swapped.
pub fn inverse(f: &GeneratorScaling) -> GeneratorScaling {
    GeneratorScaling {
        name: format!("{}⁻¹", f.name),
        source: f.target.clone(),
        target: f.source.clone(),
        rule: Rule::Inverse(Box::new(f.clone())),
        flip: None,
    }
}

/// On-disk functor description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctorSpec {
    pub functor: String,
    pub source: ParamsFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<ParamsFile>,
    /// D_i by vertex label, for ℶ.
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "D")]
    pub d: Option<std::collections::BTreeMap<String, String>>,
    /// Root vertex label, for ℷ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<u32>,
}

impl FunctorSpec {
    pub fn from_json(s: &str) -> Result<FunctorSpec, FunctorError> {
        serde_json::from_str(s).map_err(|e| FunctorError::Spec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn build(&self) -> Result<GeneratorScaling, FunctorError> {
        let src = Arc::new(self.source.to_params()?);
        let target = || -> Result<Arc<ParamSet>, FunctorError> {
            let t = self.target.as_ref().ok_or_else(|| FunctorError::Spec("missing target".into()))?;
            Ok(Arc::new(t.to_params()?))
        };
        match self.functor.as_str() {
            "digamma" => digamma(src, target()?),
            "m" => m_scaling(src),
            "beth" => {
                let dm = self.d.as_ref().ok_or_else(|| FunctorError::Spec("beth needs D".into()))?;
                let mut d = vec![FieldElem::one(); src.datum.rank()];
                for (k, v) in dm {
                    let l: u32 = k.parse().map_err(|_| FunctorError::Spec(format!("bad vertex {k:?}")))?;
                    let i = src.datum.index_of(l).map_err(|e| FunctorError::Spec(e.to_string()))?;
                    d[i] = v.parse().map_err(|e: crate::field::ParseError| FunctorError::Spec(e.to_string()))?;
                }
                beth_scaling(src, d)
            }
            "gimel" => {
                let l = self.root.ok_or_else(|| FunctorError::Spec("gimel needs root".into()))?;
                let root = src.datum.index_of(l).map_err(|e| FunctorError::Spec(e.to_string()))?;
                gimel_2cat(src, target()?, root)
            }
            "identity" => Ok(GeneratorScaling::identity(src)),
            other => Err(FunctorError::Spec(format!("unknown functor {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanDatum;
    use crate::params::{symbolic_params, SymbolNames};
    use crate::ucat::text::parse_term;

    fn names(c: &str, b: &str) -> SymbolNames {
        SymbolNames { c: c.into(), beta: b.into(), ..SymbolNames::default() }
    }

    fn a2_pair() -> (CartanDatum, Arc<ParamSet>, Arc<ParamSet>) {
        let d = CartanDatum::type_a(2);
        let cyc = Arc::new(symbolic_params(&d, &names("c", "b"), true).unwrap());
        let gen = Arc::new(symbolic_params(&d, &names("k", "b"), false).unwrap());
        (d, cyc, gen)
    }

    fn wt(d: &CartanDatum, p: &[i64]) -> Weight {
        d.weight_from_pairing(&d.coset_bases().unwrap(), p).unwrap()
    }

    #[test]
    fn digamma_bubble_images() {
        let (d, cyc, gen) = a2_pair();
        let f = digamma(cyc.clone(), gen.clone()).unwrap();
        for a in -5..=5 {
            let lam = wt(&d, &[a, 2]);
            let cw = f.bubble_scale(0, true, 3, &lam).unwrap();
            assert_eq!(cw, cyc.cplus(0, &lam).unwrap() / gen.cplus(0, &lam).unwrap(), "λ_1 = {a}");
            let ccw = f.bubble_scale(0, false, 3, &lam).unwrap();
            assert_eq!(ccw, (cyc.cplus(0, &lam).unwrap() * gen.cminus(0, &lam).unwrap()).inv(), "λ_1 = {a}");
        }
    }

    #[test]
    fn digamma_needs_cyclic_source() {
        let (_, _, gen) = a2_pair();
        assert!(matches!(digamma(gen.clone(), gen), Err(FunctorError::NotCyclic)));
    }

    #[test]
    fn dot_cyclicity_reduces_to_sfc_relation() {
        // c⁻_{i,λ−α_i} = 1/c⁺_{i,λ}
        let (d, _, gen) = a2_pair();
        for lam in d.weight_window(-3, 3).unwrap() {
            assert_eq!(gen.cminus(0, &lam.shift(0, -1)).unwrap(), gen.cplus(0, &lam).unwrap().inv());
        }
    }

    #[test]
    fn sideways_under_digamma_cancels_for_distinct_colors() {
        let (d, cyc, gen) = a2_pair();
        let f = digamma(cyc, gen).unwrap();
        for lam in d.weight_window(-4, 4).unwrap() {
            let t = parse_term(&d, &format!("src: E_1 F_2 @ {lam}\nside_lr(1,2)@0; side_rl(2,1)@0")).unwrap();
            assert!(f.image_scalar(&t).unwrap().is_one(), "{lam}");
        }
    }

    #[test]
    fn m_scalars() {
        let (d, cyc, _) = a2_pair();
        let m = m_scaling(cyc.clone()).unwrap();
        let lam = wt(&d, &[1, -2]);
        assert_eq!(m.scale(CapLeft(0), &lam).unwrap(), cyc.cplus(0, &lam).unwrap());
        assert_eq!(m.scale(CupLeft(0), &lam).unwrap(), cyc.cplus(0, &lam).unwrap().inv());
        assert_eq!(m.scale(SideCrossLR(1, 0), &lam).unwrap(), cyc.t(0, 1, &lam).unwrap().inv());
        assert!(m.scale(SideCrossRL(1, 0), &lam).unwrap().is_one());
    }

    #[test]
    fn beth_multiplicative_examples() {
        let (d, _, gen) = a2_pair();
        let dd = vec![FieldElem::sym("D1"), FieldElem::sym("D2")];
        let f = beth_scaling(gen.clone(), dd.clone()).unwrap();
        let t = parse_term(&d, "src: E_1 E_1 @ [0,0]\ndot(1)@0; dot(1)@1; cross(1,1)@0").unwrap();
        assert_eq!(f.image_scalar(&t).unwrap(), dd[0].clone());
        let id = beth_scaling(gen.clone(), vec![FieldElem::one(), FieldElem::one()]).unwrap();
        assert!(id.image_scalar(&t).unwrap().is_one());
        // ĉ± from cap·cup products
        let lam = wt(&d, &[2, 0]);
        let cw = f.bubble_scale(0, true, 1, &lam).unwrap();
        assert_eq!(cw, dd[0].clone());
        let tgt = &f.target;
        assert_eq!(tgt.cplus(0, &lam).unwrap(), dd[0].pow(-1) * gen.cplus(0, &lam).unwrap());
    }

    #[test]
    fn compose_and_inverse() {
        let (d, cyc, gen) = a2_pair();
        let f = digamma(cyc.clone(), gen.clone()).unwrap();
        let id = compose(&f, &GeneratorScaling::identity(cyc.clone())).unwrap();
        let round = compose(&inverse(&f), &f).unwrap();
        for lam in d.weight_window(-2, 2).unwrap() {
            for g in [CapLeft(0), CupLeft(1), CapRight(0), CupRight(1), DownCross(0, 1), SideCrossLR(1, 0)] {
                assert_eq!(id.scale(g, &lam).unwrap(), f.scale(g, &lam).unwrap());
                assert!(round.scale(g, &lam).unwrap().is_one());
            }
        }
        let b1 = beth_scaling(gen.clone(), vec![FieldElem::sym("D1"), FieldElem::sym("D2")]).unwrap();
        let b2 = beth_scaling(b1.target.clone(), vec![FieldElem::sym("E1"), FieldElem::sym("E2")]).unwrap();
        let both = beth_scaling(gen.clone(), vec![FieldElem::sym("D1") * FieldElem::sym("E1"), FieldElem::sym("D2") * FieldElem::sym("E2")]).unwrap();
        let c = compose(&b2, &b1).unwrap();
        let lam = wt(&d, &[1, 1]);
        for g in [UpDot(0), UpCross(1, 1), DownDot(1), UpCross(0, 1)] {
            assert_eq!(c.scale(g, &lam).unwrap(), both.scale(g, &lam).unwrap());
        }
        assert!(compose(&f, &b1).is_err());
        let m = m_scaling(cyc).unwrap();
        let kl = compose(&m, &inverse(&f)).unwrap();
        assert_eq!(kl.source, f.target);
    }

    #[test]
    fn gimel_cup_identity() {
        let d = CartanDatum::type_a(2);
        let p = Arc::new(symbolic_params(&d, &names("c", "b"), false).unwrap());
        let pp = Arc::new(
            symbolic_params(&d, &SymbolNames { t: "u".into(), beta: "g".into(), c: "k".into() }, false).unwrap(),
        );
        let f = gimel_2cat(p.clone(), pp.clone(), 0).unwrap();
        for lam in d.weight_window(-3, 3).unwrap() {
            for i in 0..2 {
                let cup = f.scale(CupLeft(i), &lam).unwrap();
                let dd = match &f.rule {
                    Rule::Gimel { g } => g.d[i].clone(),
                    _ => unreachable!(),
                };
                let alt = dd.pow(lam.pairing(i) + 1) * p.cminus(i, &lam).unwrap() / pp.cminus(i, &lam).unwrap();
                assert_eq!(cup, alt);
            }
        }
    }

    #[test]
    fn spec_round_trip() {
        let (_, cyc, gen) = a2_pair();
        let spec = FunctorSpec {
            functor: "digamma".into(),
            source: ParamsFile::from_params(&cyc).unwrap(),
            target: Some(ParamsFile::from_params(&gen).unwrap()),
            d: None,
            root: None,
        };
        let back = FunctorSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
        let f = back.build().unwrap();
        assert_eq!(*f.source, *cyc);
    }
}
