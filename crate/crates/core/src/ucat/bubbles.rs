//! Closed bubbles and End(𝟙_λ).
//!
//! End(𝟙_λ) is modelled as the free commutative algebra on positive-degree
//! bubbles of the dominant orientation at λ (clockwise when λ_i ≥ 0,
//! counterclockwise when λ_i < 0). Every other bubble, real or fake, is
//! expressed through the infinite Grassmannian relation.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use super::UcatError;
use crate::cartan::Weight;
use crate::field::FieldElem;
use crate::params::{ParamError, ParamSet};

/// A bubble of color i written in star notation ∗+r at weight λ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BubbleSymbol {
    pub i: usize,
    pub cw: bool,
    pub r: u32,
    pub weight: Weight,
}

impl BubbleSymbol {
    pub fn degree(&self) -> i64 {
        2 * self.r as i64
    }

    /// Number of dots on the underlying diagram.
    pub fn dots(&self) -> i64 {
        dots_for(self.i, self.cw, self.r as i64, &self.weight)
    }
}

impl fmt::Display for BubbleSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = if self.cw { "cw" } else { "ccw" };
        write!(f, "{o}{}[*+{}]", self.i + 1, self.r)
    }
}

impl Serialize for BubbleSymbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Dot count of the bubble ∗+r.
pub fn dots_for(i: usize, cw: bool, r: i64, lam: &Weight) -> i64 {
    if cw {
        lam.pairing(i) - 1 + r
    } else {
        -lam.pairing(i) - 1 + r
    }
}

/// Star offset r of a bubble with `dots` dots.
pub fn star_offset(i: usize, cw: bool, dots: i64, lam: &Weight) -> i64 {
    if cw {
        dots - lam.pairing(i) + 1
    } else {
        dots + lam.pairing(i) + 1
    }
}

pub fn bubble_degree(i: usize, cw: bool, dots: i64, lam: &Weight) -> i64 {
    2 * star_offset(i, cw, dots, lam)
}

/// The orientation whose positive-degree bubbles generate End(𝟙_λ) freely.
pub fn dominant_cw(i: usize, lam: &Weight) -> bool {
    lam.pairing(i) >= 0
}

/// Monomial in bubble symbols, sorted with positive exponents.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BubbleMono(pub Vec<(BubbleSymbol, u32)>);

impl BubbleMono {
    pub fn one() -> BubbleMono {
        BubbleMono(Vec::new())
    }

    pub fn var(s: BubbleSymbol) -> BubbleMono {
        BubbleMono(vec![(s, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|(s, e)| s.degree() * *e as i64).sum()
    }

    pub fn mul(&self, other: &BubbleMono) -> BubbleMono {
        let mut m: BTreeMap<BubbleSymbol, u32> = self.0.iter().cloned().collect();
        for (s, e) in &other.0 {
            *m.entry(s.clone()).or_default() += e;
        }
        BubbleMono(m.into_iter().collect())
    }

    /// Symbols with multiplicity, in order.
    pub fn factors(&self) -> Vec<BubbleSymbol> {
        self.0.iter().flat_map(|(s, e)| std::iter::repeat(s.clone()).take(*e as usize)).collect()
    }
}

impl fmt::Display for BubbleMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(s, e)| if *e == 1 { s.to_string() } else { format!("{s}^{e}") })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Polynomial in bubble symbols with field coefficients.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BubblePoly {
    pub terms: BTreeMap<BubbleMono, FieldElem>,
}

impl BubblePoly {
    pub fn zero() -> BubblePoly {
        BubblePoly::default()
    }

    pub fn constant(c: FieldElem) -> BubblePoly {
        let mut p = BubblePoly::zero();
        p.add_term(BubbleMono::one(), c);
        p
    }

    pub fn symbol(s: BubbleSymbol) -> BubblePoly {
        let mut p = BubblePoly::zero();
        p.add_term(BubbleMono::var(s), FieldElem::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> FieldElem {
        self.terms.get(&BubbleMono::one()).cloned().unwrap_or_else(FieldElem::zero)
    }

    pub fn add_term(&mut self, m: BubbleMono, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &BubblePoly) -> BubblePoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &BubblePoly) -> BubblePoly {
        self.add(&other.scale(&-FieldElem::one()))
    }

    pub fn mul(&self, other: &BubblePoly) -> BubblePoly {
        let mut out = BubblePoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }

    pub fn scale(&self, c: &FieldElem) -> BubblePoly {
        let mut out = BubblePoly::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }
}

impl fmt::Display for BubblePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.is_one() {
                    format!("{c}")
                } else if c.is_one() {
                    m.to_string()
                } else {
                    format!("({c})*{m}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for BubblePoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Prefactor used when unrolling the Grassmannian recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FakePrefactor {
    /// −1/c⁻ (clockwise) and −1/c⁺ (counterclockwise).
    #[default]
    Forced,
    /// −1/(βc⁻) and −1/(βc⁺) as printed; only consistent when β = 1.
    Printed,
    /// No prefactor at all (mutation testing).
    Dropped,
}

/// Memoizing evaluator of bubbles in one parameter set.
pub struct BubbleEval<'a> {
    pub p: &'a ParamSet,
    pub prefactor: FakePrefactor,
    cache: RefCell<HashMap<(usize, Weight, bool, i64), BubblePoly>>,
}

impl<'a> BubbleEval<'a> {
    pub fn new(p: &'a ParamSet) -> BubbleEval<'a> {
        BubbleEval::with_prefactor(p, FakePrefactor::Forced)
    }

    pub fn with_prefactor(p: &'a ParamSet, prefactor: FakePrefactor) -> BubbleEval<'a> {
        BubbleEval { p, prefactor, cache: RefCell::new(HashMap::new()) }
    }

    /// Value of the bubble ∗+r (any r, either side).
    pub fn star(&self, i: usize, lam: &Weight, cw: bool, r: i64) -> Result<BubblePoly, ParamError> {
        if r < 0 {
            return Ok(BubblePoly::zero());
        }
        if r == 0 {
            let c = if cw { self.p.cplus(i, lam)? } else { self.p.cminus(i, lam)? };
            return Ok(BubblePoly::constant(c));
        }
        if cw == dominant_cw(i, lam) {
            return Ok(BubblePoly::symbol(BubbleSymbol { i, cw, r: r as u32, weight: lam.clone() }));
        }
        let key = (i, lam.clone(), cw, r);
        if let Some(v) = self.cache.borrow().get(&key) {
            return Ok(v.clone());
        }
        // c⁻·cw(∗+r) + Σ_{y≥1} cw(∗+r−y)·ccw(∗+y) = 0, and symmetrically
        let mut sum = BubblePoly::zero();
        for y in 1..=r {
            let (a, b) = if cw {
                (self.star(i, lam, true, r - y)?, self.star(i, lam, false, y)?)
            } else {
                (self.star(i, lam, true, y)?, self.star(i, lam, false, r - y)?)
            };
            sum = sum.add(&a.mul(&b));
        }
        let lead = if cw { self.p.cminus(i, lam)? } else { self.p.cplus(i, lam)? };
        let pref = match self.prefactor {
            FakePrefactor::Forced => -lead.inv(),
            FakePrefactor::Printed => -(self.p.beta(i, lam)? * lead).inv(),
            FakePrefactor::Dropped => FieldElem::one(),
        };
        let v = sum.scale(&pref);
        self.cache.borrow_mut().insert(key, v.clone());
        Ok(v)
    }

    /// Value of the bubble with `dots` dots (negative counts are fake bubbles).
    pub fn dotted(&self, i: usize, lam: &Weight, cw: bool, dots: i64) -> Result<BubblePoly, ParamError> {
        self.star(i, lam, cw, star_offset(i, cw, dots, lam))
    }
}

/// Evaluate a real bubble (m ≥ 0 dots).
pub fn eval_bubble(i: usize, lam: &Weight, m: i64, cw: bool, p: &ParamSet) -> Result<BubblePoly, UcatError> {
    if m < 0 {
        return Err(UcatError::Parse(format!("{m} dots: fake bubbles go through fake_expand")));
    }
    Ok(BubbleEval::new(p).dotted(i, lam, cw, m)?)
}

/// Expand the fake bubble ∗+j (negative dot count) into real bubble symbols.
pub fn fake_expand(i: usize, lam: &Weight, j: i64, cw: bool, p: &ParamSet) -> Result<BubblePoly, UcatError> {
    if j < 0 {
        return Ok(BubblePoly::zero());
    }
    let dots = dots_for(i, cw, j, lam);
    if dots >= 0 {
        return Err(UcatError::NotFake(format!("{} bubble with {dots} dots", if cw { "clockwise" } else { "counterclockwise" })));
    }
    Ok(BubbleEval::new(p).star(i, lam, cw, j)?)
}

/// Dispatcher on the dot count: real bubbles evaluate, fake ones expand.
pub fn bubble_value(i: usize, lam: &Weight, dots: i64, cw: bool, p: &ParamSet) -> Result<BubblePoly, UcatError> {
    Ok(BubbleEval::new(p).dotted(i, lam, cw, dots)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct GrassmannReport {
    pub vertex: u32,
    pub weight: String,
    pub max_degree: usize,
    pub ok: bool,
    /// First coefficient that differs from the expected value, with its residual.
    pub residual: Option<(usize, BubblePoly)>,
}

/// Multiply the clockwise and counterclockwise generating series through t^N
/// and compare with the constant −1/β_{i,λ}.
pub fn grassmannian_check(i: usize, lam: &Weight, n: usize, p: &ParamSet) -> Result<GrassmannReport, UcatError> {
    grassmannian_check_with(i, lam, n, p, FakePrefactor::Forced)
}

pub fn grassmannian_check_with(
    i: usize,
    lam: &Weight,
    n: usize,
    p: &ParamSet,
    prefactor: FakePrefactor,
) -> Result<GrassmannReport, UcatError> {
    let ev = BubbleEval::with_prefactor(p, prefactor);
    let mut cw = Vec::with_capacity(n + 1);
    let mut ccw = Vec::with_capacity(n + 1);
    for r in 0..=n as i64 {
        cw.push(ev.star(i, lam, true, r)?);
        ccw.push(ev.star(i, lam, false, r)?);
    }
    let mut residual = None;
    for k in 0..=n {
        let mut c = BubblePoly::zero();
        for x in 0..=k {
            c = c.add(&cw[x].mul(&ccw[k - x]));
        }
        if k == 0 {
            c = c.sub(&BubblePoly::constant(-p.beta(i, lam)?.inv()));
        }
        if !c.is_zero() {
            residual = Some((k, c));
            break;
        }
    }
    Ok(GrassmannReport {
        vertex: p.datum.label(i),
        weight: lam.to_string(),
        max_degree: n,
        ok: residual.is_none(),
        residual,
    })
}
