//! Sparse multivariate Laurent polynomials over the rationals.

use super::symbol::Symbol;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// A Laurent monomial: sorted `(symbol, exponent)` pairs with nonzero exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Mono(pub(crate) SmallVec<[(Symbol, i32); 4]>);

impl Mono {
    pub fn one() -> Mono {
        Mono(SmallVec::new())
    }

    pub fn var(s: Symbol, e: i32) -> Mono {
        let mut v = SmallVec::new();
        if e != 0 {
            v.push((s, e));
        }
        Mono(v)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exp(&self, s: Symbol) -> i32 {
        self.0.iter().find(|(v, _)| *v == s).map(|p| p.1).unwrap_or(0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Mono(out)
    }

    pub fn inv(&self) -> Mono {
        Mono(self.0.iter().map(|&(s, e)| (s, -e)).collect())
    }

    pub fn pow(&self, k: i32) -> Mono {
        if k == 0 {
            return Mono::one();
        }
        Mono(self.0.iter().map(|&(s, e)| (s, e * k)).collect())
    }

    /// Componentwise minimum of exponents (the monomial gcd in the Laurent sense).
    pub fn gcd_mono(&self, other: &Mono) -> Mono {
        let mut out = SmallVec::new();
        let mut syms: Vec<Symbol> = self.0.iter().chain(other.0.iter()).map(|p| p.0).collect();
        syms.sort();
        syms.dedup();
        for s in syms {
            let e = self.exp(s).min(other.exp(s));
            if e != 0 {
                out.push((s, e));
            }
        }
        Mono(out)
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|p| p.1 as i64).sum()
    }

    /// Order used for display and for choosing a leading term reproducibly:
    /// lexicographic in symbol names, higher exponents first.
    pub fn cmp_display(&self, other: &Mono) -> Ordering {
        let mut a: Vec<(Symbol, i32)> = self.0.to_vec();
        let mut b: Vec<(Symbol, i32)> = other.0.to_vec();
        a.sort_by(|x, y| x.0.cmp_name(y.0));
        b.sort_by(|x, y| x.0.cmp_name(y.0));
        let mut i = 0;
        loop {
            match (a.get(i), b.get(i)) {
                (None, None) => return Ordering::Equal,
                (Some(x), None) => return if x.1 > 0 { Ordering::Less } else { Ordering::Greater },
                (None, Some(y)) => return if y.1 > 0 { Ordering::Greater } else { Ordering::Less },
                (Some(x), Some(y)) => {
                    let c = x.0.cmp_name(y.0);
                    if c != Ordering::Equal {
                        // the earlier name is present in one side only
                        return match c {
                            Ordering::Less => {
                                if x.1 > 0 {
                                    Ordering::Less
                                } else {
                                    Ordering::Greater
                                }
                            }
                            _ => {
                                if y.1 > 0 {
                                    Ordering::Greater
                                } else {
                                    Ordering::Less
                                }
                            }
                        };
                    }
                    if x.1 != y.1 {
                        return y.1.cmp(&x.1);
                    }
                }
            }
            i += 1;
        }
    }
}

/// A Laurent polynomial with rational coefficients; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    pub(crate) terms: BTreeMap<Mono, BigRational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn constant(c: BigRational) -> Poly {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Mono::one(), c);
        }
        p
    }

    pub fn one() -> Poly {
        Poly::constant(BigRational::one())
    }

    pub fn term(c: BigRational, m: Mono) -> Poly {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Mono::one()).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn single_term(&self) -> Option<(&Mono, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        match self.single_term() {
            Some((m, c)) if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if let Some((m, c)) = other.single_term() {
            return self.mul_term(c, m);
        }
        if let Some((m, c)) = self.single_term() {
            return other.mul_term(c, m);
        }
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn mul_term(&self, c: &BigRational, m: &Mono) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m1, c1)| (m1.mul(m), c1 * c)).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        self.mul_term(c, &Mono::one())
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Monomial gcd of all terms (componentwise minimum exponent).
    pub fn mono_content(&self) -> Mono {
        let mut it = self.terms.keys();
        let mut acc = match it.next() {
            Some(m) => m.clone(),
            None => return Mono::one(),
        };
        for m in it {
            acc = acc.gcd_mono(m);
        }
        acc
    }

    pub fn vars(&self) -> Vec<Symbol> {
        let mut v: Vec<Symbol> = self.terms.keys().flat_map(|m| m.0.iter().map(|p| p.0)).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Leading term under the reproducible display order.
    pub fn leading_display(&self) -> Option<(&Mono, &BigRational)> {
        self.terms.iter().min_by(|a, b| a.0.cmp_display(b.0))
    }

    pub fn evaluate(&self, vals: &dyn Fn(Symbol) -> Option<BigRational>) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(s, e) in m.0.iter() {
                let v = vals(s)?;
                if v.is_zero() && e < 0 {
                    return None;
                }
                t *= pow_rat(&v, e);
            }
            acc += t;
        }
        Some(acc)
    }

    // ---- polynomial (nonnegative exponent) algorithms used for fraction reduction ----

    fn deg_in(&self, v: Symbol) -> i32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    /// Coefficient of `v^k`, as a polynomial in the remaining symbols.
    fn coeff_in(&self, v: Symbol, k: i32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.exp(v) == k {
                let rest = Mono(m.0.iter().copied().filter(|p| p.0 != v).collect());
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    fn coeffs_in(&self, v: Symbol) -> Vec<Poly> {
        let d = self.deg_in(v);
        (0..=d).map(|k| self.coeff_in(v, k)).filter(|p| !p.is_zero()).collect()
    }

    fn lex_leading(&self) -> Option<(&Mono, &BigRational)> {
        // lexicographic by symbol id, higher exponent first
        self.terms.iter().max_by(|a, b| lex_cmp(a.0, b.0))
    }

    /// Exact division of polynomials; `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &Poly) -> Option<Poly> {
        if other.is_zero() {
            return None;
        }
        if let Some((m, c)) = other.single_term() {
            return Some(self.mul_term(&c.recip(), &m.inv()));
        }
        let (lm, lc) = {
            let (m, c) = other.lex_leading().unwrap();
            (m.clone(), c.clone())
        };
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        let mut guard = 0usize;
        while let Some((rm, rc)) = rem.lex_leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = rm.mul(&lm.inv());
            if qm.0.iter().any(|p| p.1 < 0) {
                return None;
            }
            let qc = rc / &lc;
            rem = rem.sub(&other.mul_term(&qc, &qm));
            quot.add_term(qm, qc);
            guard += 1;
            if guard > 1_000_000 {
                return None;
            }
        }
        Some(quot)
    }

    fn numeric_content(&self) -> BigRational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num_integer::Integer::gcd(&num, c.numer());
            den = num_integer::Integer::lcm(&den, c.denom());
        }
        if num.is_zero() {
            BigRational::one()
        } else {
            BigRational::new(num, den)
        }
    }

    fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let c = self.numeric_content();
        self.scale(&c.recip())
    }

    /// Greatest common divisor of two polynomials with nonnegative exponents,
    /// up to a rational unit.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.primitive();
        }
        if b.is_zero() {
            return a.primitive();
        }
        let mut vars = a.vars();
        vars.extend(b.vars());
        vars.sort();
        vars.dedup();
        let Some(&v) = vars.first() else {
            return Poly::one();
        };
        let ca = a.content_in(v);
        let cb = b.content_in(v);
        let c = Poly::gcd(&ca, &cb);
        let mut pa = a.div_exact(&ca).expect("content divides");
        let mut pb = b.div_exact(&cb).expect("content divides");
        if pa.deg_in(v) < pb.deg_in(v) {
            std::mem::swap(&mut pa, &mut pb);
        }
        while !pb.is_zero() && pb.deg_in(v) > 0 {
            let r = pa.prem(&pb, v);
            pa = pb;
            pb = if r.is_zero() { r } else { r.primitive_in(v) };
        }
        let g = if pb.is_zero() { pa.primitive_in(v) } else { Poly::one() };
        c.mul(&g).primitive()
    }

    fn content_in(&self, v: Symbol) -> Poly {
        let cs = self.coeffs_in(v);
        let mut g = Poly::zero();
        for c in cs {
            g = Poly::gcd(&g, &c);
            if g.as_constant().is_some() {
                return Poly::one();
            }
        }
        if g.is_zero() {
            Poly::one()
        } else {
            g
        }
    }

    fn primitive_in(&self, v: Symbol) -> Poly {
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides").primitive()
    }

    fn prem(&self, b: &Poly, v: Symbol) -> Poly {
        let n = b.deg_in(v);
        let lb = b.coeff_in(v, n);
        let mut r = self.clone();
        while !r.is_zero() && r.deg_in(v) >= n {
            let m = r.deg_in(v);
            let lr = r.coeff_in(v, m);
            let shift = Poly::term(BigRational::one(), Mono::var(v, m - n));
            r = r.mul(&lb).sub(&lr.mul(&shift).mul(b));
        }
        r
    }
}

fn lex_cmp(a: &Mono, b: &Mono) -> Ordering {
    let mut i = 0;
    loop {
        match (a.0.get(i), b.0.get(i)) {
            (None, None) => return Ordering::Equal,
            (Some(x), None) => return if x.1 > 0 { Ordering::Greater } else { Ordering::Less },
            (None, Some(y)) => return if y.1 > 0 { Ordering::Less } else { Ordering::Greater },
            (Some(x), Some(y)) => {
                if x.0 != y.0 {
                    return if x.0 < y.0 {
                        if x.1 > 0 {
                            Ordering::Greater
                        } else {
                            Ordering::Less
                        }
                    } else if y.1 > 0 {
                        Ordering::Less
                    } else {
                        Ordering::Greater
                    };
                }
                if x.1 != y.1 {
                    return x.1.cmp(&y.1);
                }
            }
        }
        i += 1;
    }
}

pub(crate) fn pow_rat(v: &BigRational, e: i32) -> BigRational {
    if e >= 0 {
        num_traits::pow(v.clone(), e as usize)
    } else {
        num_traits::pow(v.recip(), (-e) as usize)
    }
}

pub(crate) fn fmt_rat(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Mono, &BigRational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| a.0.cmp_display(b.0));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let ms = fmt_mono(m);
            if ms.is_empty() {
                write!(f, "{}", fmt_rat(&a))?;
            } else if a.is_one() {
                write!(f, "{ms}")?;
            } else {
                write!(f, "{}*{ms}", fmt_rat(&a))?;
            }
        }
        Ok(())
    }
}

pub(crate) fn fmt_mono(m: &Mono) -> String {
    let mut v: Vec<(Symbol, i32)> = m.0.to_vec();
    v.sort_by(|a, b| a.0.cmp_name(b.0));
    v.iter()
        .map(|(s, e)| if *e == 1 { s.name() } else { format!("{}^{}", s.name(), e) })
        .collect::<Vec<_>>()
        .join("*")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::term(BigRational::one(), Mono::var(Symbol::new("px"), 1))
    }
    fn y() -> Poly {
        Poly::term(BigRational::one(), Mono::var(Symbol::new("py"), 1))
    }

    #[test]
    fn gcd_of_shared_factor() {
        let a = x().add(&y()).mul(&x().sub(&Poly::one()));
        let b = x().add(&y()).mul(&y().add(&Poly::one()));
        let g = Poly::gcd(&a, &b);
        let expect = x().add(&y());
        assert!(g.div_exact(&expect).and_then(|q| q.as_constant()).is_some());
    }

    #[test]
    fn exact_division_roundtrip() {
        let a = x().pow(3).sub(&y().pow(3));
        let b = x().sub(&y());
        let q = a.div_exact(&b).unwrap();
        assert_eq!(q.mul(&b), a);
        assert!(x().add(&Poly::one()).div_exact(&y().add(&Poly::one())).is_none());
    }

    #[test]
    fn laurent_monomials_cancel() {
        let s = Symbol::new("pz");
        let m = Mono::var(s, 3).mul(&Mono::var(s, -3));
        assert!(m.is_one());
    }
}
