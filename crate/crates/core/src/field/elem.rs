//! Elements of the field of fractions of Laurent polynomials over the rationals.

use super::poly::{Mono, Poly};
use super::symbol::Symbol;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// An exact field element `num/den`.
///
/// Canonical form: `den` is either `1` or a polynomial with nonnegative
/// exponents, no monomial factor, at least two terms, a monic display-leading
/// term and no common factor with `num`. Monomial denominators are absorbed
/// into `num` as negative exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldElem {
    num: Poly,
    den: Poly,
}

impl Default for FieldElem {
    fn default() -> Self {
        FieldElem::zero()
    }
}

impl FieldElem {
    pub fn zero() -> FieldElem {
        FieldElem { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> FieldElem {
        FieldElem { num: Poly::one(), den: Poly::one() }
    }

    pub fn from_i64(v: i64) -> FieldElem {
        FieldElem::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(c: BigRational) -> FieldElem {
        FieldElem { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_frac(n: i64, d: i64) -> FieldElem {
        FieldElem::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn sym(name: &str) -> FieldElem {
        FieldElem::symbol(Symbol::new(name))
    }

    pub fn symbol(s: Symbol) -> FieldElem {
        FieldElem { num: Poly::term(BigRational::one(), Mono::var(s, 1)), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> FieldElem {
        FieldElem { num: p, den: Poly::one() }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    /// True when the element is `c·m` for a rational `c` and a Laurent monomial `m`.
    pub fn is_monomial(&self) -> bool {
        self.den.is_one() && self.num.len() == 1
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    fn from_parts(num: Poly, den: Poly) -> FieldElem {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return FieldElem::zero();
        }
        if let Some((m, c)) = den.single_term() {
            return FieldElem { num: num.mul_term(&c.recip(), &m.inv()), den: Poly::one() };
        }
        // move monomial content of both parts into the numerator
        let dm = den.mono_content();
        let nm = num.mono_content();
        let d0 = den.mul_term(&BigRational::one(), &dm.inv());
        let n0 = num.mul_term(&BigRational::one(), &nm.inv());
        let shift = nm.mul(&dm.inv());
        let g = Poly::gcd(&n0, &d0);
        let (n1, d1) = if g.as_constant().is_some() {
            (n0, d0)
        } else {
            (n0.div_exact(&g).expect("gcd divides"), d0.div_exact(&g).expect("gcd divides"))
        };
        if let Some((m, c)) = d1.single_term() {
            let inv = c.recip();
            return FieldElem {
                num: n1.mul_term(&inv, &shift.mul(&m.inv())),
                den: Poly::one(),
            };
        }
        let lc = d1.leading_display().unwrap().1.clone();
        let inv = lc.recip();
        FieldElem { num: n1.mul_term(&inv, &shift), den: d1.scale(&inv) }
    }

    pub fn checked_inv(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return None;
        }
        Some(FieldElem::from_parts(self.den.clone(), self.num.clone()))
    }

    /// Multiplicative inverse; panics on zero (use [`FieldElem::checked_inv`] to test).
    pub fn inv(&self) -> FieldElem {
        self.checked_inv().expect("inverse of zero")
    }

    pub fn pow(&self, k: i64) -> FieldElem {
        if k == 0 {
            return FieldElem::one();
        }
        if self.is_monomial() {
            let (m, c) = self.num.single_term().unwrap();
            let e = i32::try_from(k).expect("exponent range");
            let cc = super::poly::pow_rat(c, e);
            return FieldElem { num: Poly::term(cc, m.pow(e)), den: Poly::one() };
        }
        let base = if k < 0 { self.inv() } else { self.clone() };
        let e = k.unsigned_abs() as u32;
        FieldElem { num: base.num.pow(e), den: base.den.pow(e) }
    }

    /// Evaluate at rational values of the symbols; `None` if a symbol is
    /// unassigned or a denominator vanishes.
    pub fn evaluate(&self, vals: &dyn Fn(Symbol) -> Option<BigRational>) -> Option<BigRational> {
        let n = self.num.evaluate(vals)?;
        let d = self.den.evaluate(vals)?;
        if d.is_zero() {
            None
        } else {
            Some(n / d)
        }
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v.sort();
        v.dedup();
        v
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            let n = if self.num.len() > 1 { format!("({})", self.num) } else { self.num.to_string() };
            write!(f, "{n}/({})", self.den)
        }
    }
}

impl std::str::FromStr for FieldElem {
    type Err = super::parse::ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parse::parse(s)
    }
}

impl serde::Serialize for FieldElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for FieldElem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn add_impl(a: &FieldElem, b: &FieldElem) -> FieldElem {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.den.is_one() && b.den.is_one() {
        return FieldElem { num: a.num.add(&b.num), den: Poly::one() };
    }
    if a.den == b.den {
        return FieldElem::from_parts(a.num.add(&b.num), a.den.clone());
    }
    FieldElem::from_parts(a.num.mul(&b.den).add(&b.num.mul(&a.den)), a.den.mul(&b.den))
}

fn mul_impl(a: &FieldElem, b: &FieldElem) -> FieldElem {
    if a.is_zero() || b.is_zero() {
        return FieldElem::zero();
    }
    if a.den.is_one() && b.den.is_one() {
        return FieldElem { num: a.num.mul(&b.num), den: Poly::one() };
    }
    FieldElem::from_parts(a.num.mul(&b.num), a.den.mul(&b.den))
}

fn neg_impl(a: &FieldElem) -> FieldElem {
    FieldElem { num: a.num.neg(), den: a.den.clone() }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: &FieldElem) -> FieldElem {
                $body(self, rhs)
            }
        }
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                $body(&self, &rhs)
            }
        }
        impl $tr<&FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: &FieldElem) -> FieldElem {
                $body(&self, rhs)
            }
        }
        impl $tr<FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                $body(self, &rhs)
            }
        }
    };
}

binop!(Add, add, add_impl);
binop!(Sub, sub, |a: &FieldElem, b: &FieldElem| add_impl(a, &neg_impl(b)));
binop!(Mul, mul, mul_impl);
binop!(Div, div, |a: &FieldElem, b: &FieldElem| mul_impl(a, &b.inv()));

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        neg_impl(&self)
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        neg_impl(self)
    }
}

impl std::iter::Sum for FieldElem {
    fn sum<I: Iterator<Item = FieldElem>>(iter: I) -> FieldElem {
        iter.fold(FieldElem::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for FieldElem {
    fn product<I: Iterator<Item = FieldElem>>(iter: I) -> FieldElem {
        iter.fold(FieldElem::one(), |a, b| a * b)
    }
}

impl From<i64> for FieldElem {
    fn from(v: i64) -> Self {
        FieldElem::from_i64(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: &str) -> FieldElem {
        FieldElem::sym(n)
    }

    #[test]
    fn monomial_division_stays_laurent() {
        let q = s("a") / (s("b") * s("a").pow(2));
        assert!(q.is_monomial());
        assert_eq!(q, s("a").inv() * s("b").inv());
    }

    #[test]
    fn cancels_common_factor() {
        let a = s("a");
        let b = s("b");
        let q = (&a * &a - &b * &b) / (&a + &b);
        assert_eq!(q, &a - &b);
    }

    #[test]
    fn rational_functions_add() {
        let a = s("a");
        let one = FieldElem::one();
        let lhs = (&one / (&a + &one)) + (&one / (&a - &one));
        let rhs = FieldElem::from_i64(2) * &a / (&a * &a - &one);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.to_string().parse::<FieldElem>().unwrap(), lhs);
    }

    #[test]
    fn inverse_of_zero_is_none() {
        assert!(FieldElem::zero().checked_inv().is_none());
        assert_eq!((s("x") - s("x")), FieldElem::zero());
    }

    #[test]
    fn negative_powers() {
        let x = s("x") + FieldElem::one();
        assert_eq!(x.pow(-2) * x.pow(2), FieldElem::one());
    }
}
