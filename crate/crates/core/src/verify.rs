//! Relation-preservation harness for rescaling functors.
//!
//! For each relation instance L = R: expand fake bubbles in the source
//! parameters, multiply every diagram by its image scalar, evaluate all
//! bubbles in the target parameters, and compare with the same instance
//! instantiated in the target. The instance passes when the image of L − R
//! is a nonzero multiple γ of the target's L − R (or both vanish).

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::cartan::{CartanDatum, Weight};
use crate::field::FieldElem;
use crate::functors::{FunctorError, GeneratorScaling};
use crate::params::ParamSet;
use crate::ucat::relations::expand_term;
use crate::ucat::{corpus, BubbleEval, EvalMode, Formal2Mor, RelationInstance, RelationTemplate, UcatError};

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("unknown relation {0:?}")]
    UnknownRelation(String),
    #[error("{0}")]
    Weights(String),
    #[error("{0}")]
    Threads(String),
}

/// Weights at which relations are instantiated.
#[derive(Debug, Clone)]
pub enum WeightSample {
    /// Every weight with all pairings (or gl_n entries) in `lo..=hi`.
    Window { lo: i64, hi: i64 },
    List(Vec<Weight>),
}

impl WeightSample {
    pub fn weights(&self, p: &ParamSet) -> Result<Vec<Weight>, VerifyError> {
        match self {
            WeightSample::List(v) => Ok(v.clone()),
            WeightSample::Window { lo, hi } if p.gl => Ok(p.datum.gl_window(*lo, *hi)),
            WeightSample::Window { lo, hi } => {
                p.datum.weight_window(*lo, *hi).map_err(|e| VerifyError::Weights(e.to_string()))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerificationPlan {
    pub functor: GeneratorScaling,
    /// Relation names; empty means the whole corpus.
    pub relations: Vec<String>,
    pub weights: WeightSample,
    /// Worker threads (0 = rayon default).
    pub threads: usize,
    /// Keep passing records in the report, not only failures.
    pub keep_records: bool,
}

impl VerificationPlan {
    pub fn new(functor: GeneratorScaling, lo: i64, hi: i64) -> VerificationPlan {
        VerificationPlan {
            functor,
            relations: Vec::new(),
            weights: WeightSample::Window { lo, hi },
            threads: 0,
            keep_records: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceRecord {
    pub relation: String,
    pub colors: Vec<u32>,
    pub weight: String,
    pub variant: i64,
    /// Image scalar shared by every lhs diagram, if there is one.
    pub lhs_scalar: Option<String>,
    pub rhs_scalar: Option<String>,
    pub gamma: Option<String>,
    pub matched: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RelationCount {
    pub checked: usize,
    pub passed: usize,
    pub skipped: usize,
}

/// A monomial ± Π atoms^e found to describe a crossing-cyclicity scalar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mod4Pattern {
    pub sign: i8,
    /// Atom name to exponent (only nonzero exponents).
    pub exps: BTreeMap<String, i8>,
}

impl std::fmt::Display for Mod4Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (a, e) in &self.exps {
            parts.push(if *e == 1 { a.clone() } else { format!("{a}⁻¹") });
        }
        let body = if parts.is_empty() { "1".to_string() } else { parts.join(" ") };
        if self.sign < 0 {
            write!(f, "−{body}")
        } else {
            write!(f, "{body}")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mod4Entry {
    /// `same`, `adjacent` or `distant`.
    pub pair: String,
    /// (λ_i mod 4, λ_j mod 4) at the region right of the relation.
    pub class: (u8, u8),
    pub samples: usize,
    /// None when no single monomial fits every sample.
    pub pattern: Option<Mod4Pattern>,
    /// The lhs image scalar at the first sample.
    pub example: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub functor: String,
    pub weights: usize,
    pub checked: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub per_relation: BTreeMap<String, RelationCount>,
    pub failures: Vec<InstanceRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub records: Vec<InstanceRecord>,
    pub mod4: Vec<Mod4Entry>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    /// Table entry for crossing cyclicity, if the class was sampled.
    pub fn mod4_entry(&self, pair: &str, class: (u8, u8)) -> Option<&Mod4Entry> {
        self.mod4.iter().find(|e| e.pair == pair && e.class == class)
    }

    pub fn to_table(&self) -> String {
        let mut s = format!(
            "functor {}: {} weights, {} instances checked, {} passed, {} failed, {} skipped\n",
            self.functor, self.weights, self.checked, self.passed, self.failed, self.skipped
        );
        s.push_str(&format!("{:<22} {:>8} {:>8} {:>8}\n", "relation", "checked", "passed", "skipped"));
        for (r, c) in &self.per_relation {
            s.push_str(&format!("{:<22} {:>8} {:>8} {:>8}\n", r, c.checked, c.passed, c.skipped));
        }
        if !self.mod4.is_empty() {
            s.push_str("crossing cyclicity scalar by (λ_i, λ_j) mod 4:\n");
            for e in &self.mod4 {
                let p = e.pattern.as_ref().map_or("weight-dependent".to_string(), |p| p.to_string());
                s.push_str(&format!("  {:<9} ({},{})  {}\n", e.pair, e.class.0, e.class.1, p));
            }
        }
        for f in self.failures.iter().take(20) {
            s.push_str(&format!(
                "FAIL {}({}) @ {} #{}{}\n",
                f.relation,
                f.colors.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","),
                f.weight,
                f.variant,
                f.error.as_ref().map_or(String::new(), |e| format!(": {e}"))
            ));
        }
        if self.failures.len() > 20 {
            s.push_str(&format!("... {} more failures\n", self.failures.len() - 20));
        }
        s
    }
}

fn color_tuples(r: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|w| (0..r).map(move |c| [w.clone(), vec![c]].concat()))
            .collect();
    }
    out
}

enum Outcome {
    Skipped(&'static str),
    Checked(Box<InstanceRecord>, Option<Box<CycSample>>),
}

/// Data kept for the mod-4 table.
struct CycSample {
    i: usize,
    j: usize,
    weight: Weight,
    scalar: FieldElem,
}

fn common_scalar(f: &GeneratorScaling, m: &Formal2Mor) -> Result<Option<FieldElem>, FunctorError> {
    let mut out: Option<FieldElem> = None;
    for (t, _) in m.iter_terms() {
        let s = f.image_scalar(&t)?;
        match &out {
            None => out = Some(s),
            Some(o) if *o != s => return Ok(None),
            _ => {}
        }
    }
    Ok(out)
}

/// Image of `l − r` evaluated in the target.
fn image(f: &GeneratorScaling, ev: &BubbleEval<'_>, l: &Formal2Mor, r: &Formal2Mor) -> Result<Formal2Mor, FunctorError> {
    let mut img = Formal2Mor::zero(l.src.clone(), l.dst.clone());
    for (m, sign) in [(l, FieldElem::one()), (r, FieldElem::from_i64(-1))] {
        for (t, c) in m.iter_terms() {
            let k = f.image_scalar(&t)? * c * &sign;
            for (e, w) in expand_term(&t.slices, ev, EvalMode::Full)? {
                img.add_slices(w, &k * e);
            }
        }
    }
    Ok(img)
}

/// Check one instance.
pub fn check_instance(f: &GeneratorScaling, inst: &RelationInstance) -> InstanceRecord {
    let datum = &f.source.datum;
    let mut rec = InstanceRecord {
        relation: inst.relation.to_string(),
        colors: inst.colors.iter().map(|&c| datum.label(c)).collect(),
        weight: inst.weight.to_string(),
        variant: inst.variant,
        lhs_scalar: None,
        rhs_scalar: None,
        gamma: None,
        matched: false,
        error: None,
    };
    let run = || -> Result<(Option<FieldElem>, Option<FieldElem>, Option<FieldElem>), FunctorError> {
        let (l, r) = inst.sides(&f.source, EvalMode::FakesOnly)?;
        let ev = BubbleEval::new(&f.target);
        let img = image(f, &ev, &l, &r)?;
        let tgt = inst.difference(&f.target, EvalMode::Full)?;
        Ok((common_scalar(f, &l)?, common_scalar(f, &r)?, img.ratio_to(&tgt)))
    };
    match run() {
        Ok((ls, rs, g)) => {
            rec.lhs_scalar = ls.map(|x| x.to_string());
            rec.rhs_scalar = rs.map(|x| x.to_string());
            rec.matched = g.is_some();
            rec.gamma = g.map(|x| x.to_string());
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

fn check_weight(f: &GeneratorScaling, templates: &[RelationTemplate], lam: &Weight) -> Vec<Outcome> {
    let datum = &f.source.datum;
    let mut out = Vec::new();
    for tpl in templates {
        for colors in color_tuples(datum.rank(), tpl.arity) {
            if !(tpl.applicable)(datum, &colors, lam) {
                out.push(Outcome::Skipped(tpl.name));
                continue;
            }
            for v in (tpl.variants)(&colors, lam) {
                let inst = match tpl.instance(datum, &colors, lam, v) {
                    Ok(i) => i,
                    Err(e) => {
                        let rec = InstanceRecord {
                            relation: tpl.name.to_string(),
                            colors: colors.iter().map(|&c| datum.label(c)).collect(),
                            weight: lam.to_string(),
                            variant: v,
                            lhs_scalar: None,
                            rhs_scalar: None,
                            gamma: None,
                            matched: false,
                            error: Some(UcatError::to_string(&e)),
                        };
                        out.push(Outcome::Checked(Box::new(rec), None));
                        continue;
                    }
                };
                let rec = check_instance(f, &inst);
                let cyc = if tpl.name == "crossing-cyclicity" && rec.error.is_none() && f.branches_mod4() {
                    let (l, _) = inst.sides(&f.source, EvalMode::FakesOnly).ok().unzip();
                    l.and_then(|l| common_scalar(f, &l).ok().flatten()).map(|scalar| {
                        Box::new(CycSample { i: colors[0], j: colors[1], weight: lam.clone(), scalar })
                    })
                } else {
                    None
                };
                out.push(Outcome::Checked(Box::new(rec), cyc));
            }
        }
    }
    out
}

/// Run a plan. Output order is independent of the thread count.
pub fn verify(plan: &VerificationPlan) -> Result<VerificationReport, VerifyError> {
    let all = corpus();
    let templates: Vec<RelationTemplate> = if plan.relations.is_empty() {
        all
    } else {
        plan.relations
            .iter()
            .map(|n| all.iter().find(|t| t.name == n).cloned().ok_or_else(|| VerifyError::UnknownRelation(n.clone())))
            .collect::<Result<_, _>>()?
    };
    let f = &plan.functor;
    let weights = plan.weights.weights(&f.source)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.threads)
        .build()
        .map_err(|e| VerifyError::Threads(e.to_string()))?;
    let per_weight: Vec<Vec<Outcome>> =
        pool.install(|| weights.par_iter().map(|lam| check_weight(f, &templates, lam)).collect());

    let mut rep = VerificationReport {
        functor: f.name.clone(),
        weights: weights.len(),
        checked: 0,
        passed: 0,
        failed: 0,
        skipped: 0,
        per_relation: templates.iter().map(|t| (t.name.to_string(), RelationCount::default())).collect(),
        failures: Vec::new(),
        records: Vec::new(),
        mod4: Vec::new(),
    };
    let mut cyc = Vec::new();
    for o in per_weight.into_iter().flatten() {
        match o {
            Outcome::Skipped(name) => {
                rep.skipped += 1;
                rep.per_relation.get_mut(name).expect("template counted").skipped += 1;
            }
            Outcome::Checked(rec, sample) => {
                let c = rep.per_relation.get_mut(&rec.relation).expect("template counted");
                c.checked += 1;
                rep.checked += 1;
                if rec.matched {
                    c.passed += 1;
                    rep.passed += 1;
                    if plan.keep_records {
                        rep.records.push(*rec);
                    }
                } else {
                    rep.failed += 1;
                    if plan.keep_records {
                        rep.records.push((*rec).clone());
                    }
                    rep.failures.push(*rec);
                }
                if let Some(s) = sample {
                    cyc.push(*s);
                }
            }
        }
    }
    rep.mod4 = mod4_table(f, &cyc);
    Ok(rep)
}

fn pair_kind(d: &CartanDatum, i: usize, j: usize) -> &'static str {
    if i == j {
        "same"
    } else if d.a(i, j) != 0 {
        "adjacent"
    } else {
        "distant"
    }
}

/// Candidate atoms for a crossing-cyclicity scalar at colors (i, j).
fn atoms(f: &GeneratorScaling, s: &CycSample) -> Vec<(String, FieldElem)> {
    let (i, j, lam) = (s.i, s.j, &s.weight);
    let (src, tgt) = (&f.source, &f.target);
    let val = |r: Result<FieldElem, crate::params::ParamError>| r.unwrap_or_else(|_| FieldElem::one());
    let mut v = vec![
        ("c⁺_i".to_string(), val(tgt.cplus(i, lam))),
        ("c_i".to_string(), val(src.cplus(i, lam))),
        ("β_i".to_string(), val(tgt.beta(i, lam))),
    ];
    if i != j {
        v.extend([
            ("t_ij".to_string(), val(tgt.t(i, j, lam))),
            ("t_ji".to_string(), val(tgt.t(j, i, lam))),
            ("c⁺_j".to_string(), val(tgt.cplus(j, lam))),
            ("c_j".to_string(), val(src.cplus(j, lam))),
            ("β_j".to_string(), val(tgt.beta(j, lam))),
        ]);
    }
    v
}

fn pattern_value(p: &Mod4Pattern, atoms: &[(String, FieldElem)]) -> FieldElem {
    let mut acc = FieldElem::from_i64(p.sign as i64);
    for (name, v) in atoms {
        if let Some(e) = p.exps.get(name) {
            acc = acc * v.pow(*e as i64);
        }
    }
    acc
}

/// Smallest monomial pattern in the atoms, up to sign, that fits every sample.
fn find_pattern(samples: &[(Vec<(String, FieldElem)>, FieldElem)]) -> Option<Mod4Pattern> {
    let names: Vec<String> = samples.first()?.0.iter().map(|(n, _)| n.clone()).collect();
    let k = names.len();
    let mut cands: Vec<Vec<i8>> = (0..3usize.pow(k as u32))
        .map(|mut n| {
            (0..k)
                .map(|_| {
                    let e = (n % 3) as i8 - 1;
                    n /= 3;
                    e
                })
                .collect()
        })
        .collect();
    cands.sort_by_key(|e| e.iter().filter(|x| **x != 0).count());
    for e in cands {
        let exps: BTreeMap<String, i8> =
            e.iter().zip(&names).filter(|(x, _)| **x != 0).map(|(x, n)| (n.clone(), *x)).collect();
        for sign in [1i8, -1] {
            let p = Mod4Pattern { sign, exps: exps.clone() };
            if samples.iter().all(|(a, t)| pattern_value(&p, a) == *t) {
                return Some(p);
            }
        }
    }
    None
}

fn mod4_table(f: &GeneratorScaling, samples: &[CycSample]) -> Vec<Mod4Entry> {
    let d = &f.source.datum;
    let mut groups: BTreeMap<(usize, (u8, u8)), Vec<&CycSample>> = BTreeMap::new();
    let order = ["same", "adjacent", "distant"];
    for s in samples {
        let kind = pair_kind(d, s.i, s.j);
        let class = (s.weight.pairing(s.i).rem_euclid(4) as u8, s.weight.pairing(s.j).rem_euclid(4) as u8);
        let k = order.iter().position(|x| *x == kind).expect("known kind");
        groups.entry((k, class)).or_default().push(s);
    }
    groups
        .into_iter()
        .map(|((k, class), v)| {
            let first = v[0];
            let data: Vec<_> = v.iter().map(|s| (atoms(f, s), s.scalar.clone())).collect();
            let pattern = find_pattern(&data);
            Mod4Entry {
                pair: order[k].to_string(),
                class,
                samples: v.len(),
                pattern,
                example: first.scalar.to_string(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functors::{beth_scaling, digamma, gimel_2cat};
    use crate::params::{symbolic_params, SymbolNames};
    use std::sync::Arc;

    fn sym(d: &CartanDatum, c: &str, cyc: bool) -> Arc<ParamSet> {
        Arc::new(symbolic_params(d, &SymbolNames { c: c.into(), ..SymbolNames::default() }, cyc).unwrap())
    }

    #[test]
    fn digamma_a2_small_window() {
        let d = CartanDatum::type_a(2);
        let f = digamma(sym(&d, "c", true), sym(&d, "k", false)).unwrap();
        let rep = verify(&VerificationPlan::new(f, -2, 2)).unwrap();
        assert!(rep.ok(), "{}", rep.to_table());
        assert!(rep.checked > 0 && rep.skipped > 0);
    }

    #[test]
    fn identity_gimel_has_unit_scalars() {
        let d = CartanDatum::type_a(2);
        let p = sym(&d, "c", false);
        let f = gimel_2cat(p.clone(), p, 0).unwrap();
        let mut plan = VerificationPlan::new(f, -1, 1);
        plan.keep_records = true;
        let rep = verify(&plan).unwrap();
        assert!(rep.ok(), "{}", rep.to_table());
        assert!(rep.records.iter().all(|r| r.gamma.as_deref() == Some("1")));
    }

    #[test]
    fn mutation_is_detected() {
        let d = CartanDatum::type_a(2);
        let f = digamma(sym(&d, "c", true), sym(&d, "k", false)).unwrap();
        let g = f.flipped("cap_left:23").unwrap();
        let mut plan = VerificationPlan::new(g, -2, 2);
        plan.relations = vec!["biadjoint-1a".into(), "biadjoint-1b".into(), "bubble-cw".into(), "grassmannian".into()];
        let rep = verify(&plan).unwrap();
        assert!(!rep.ok());
    }

    #[test]
    fn thread_count_does_not_change_report() {
        let d = CartanDatum::type_a(2);
        let p = sym(&d, "c", false);
        let f = beth_scaling(p, vec![FieldElem::sym("D1"), FieldElem::sym("D2")]).unwrap();
        let mut a = VerificationPlan::new(f, -1, 1);
        a.keep_records = true;
        let mut b = a.clone();
        a.threads = 1;
        b.threads = 4;
        let (ra, rb) = (verify(&a).unwrap(), verify(&b).unwrap());
        assert!(ra.ok(), "{}", ra.to_table());
        assert_eq!(serde_json::to_string(&ra).unwrap(), serde_json::to_string(&rb).unwrap());
    }

    #[test]
    fn unknown_relation_is_an_error() {
        let d = CartanDatum::type_a(1);
        let p = sym(&d, "c", false);
        let mut plan = VerificationPlan::new(GeneratorScaling::identity(p), 0, 0);
        plan.relations = vec!["nope".into()];
        assert!(matches!(verify(&plan), Err(VerifyError::UnknownRelation(_))));
    }
}
