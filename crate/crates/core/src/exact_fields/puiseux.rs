//! Truncated Puiseux series over the rationals, ordered by declaring the
//! variable `t` a positive infinitesimal.
//!
//! An element is a finite list of terms `c * t^e` together with an optional
//! certified window `w`: a truncated element stands for every series that
//! agrees with its terms below `t^w`. Exact elements carry no window. All
//! arithmetic propagates windows so that nothing is ever claimed beyond what
//! was certified, and every sign or zero test that would need information
//! past the window fails with [`Error::PrecisionExhausted`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exponents of `t`.
pub type Exponent = Rational64;
/// Coefficients.
pub type Rational = BigRational;

/// Default relative depth used by `inverse` and `sqrt` when the caller has
/// no better bound.
pub const DEFAULT_DEPTH: i64 = 8;

static DEPTH_OVERRIDE: RwLock<Option<Exponent>> = RwLock::new(None);

pub fn default_depth() -> Exponent {
    DEPTH_OVERRIDE
        .read()
        .ok()
        .and_then(|d| *d)
        .unwrap_or_else(|| Exponent::from_integer(DEFAULT_DEPTH))
}

/// Replaces the default depth for the whole process; `None` restores it.
pub fn set_default_depth(depth: Option<Exponent>) -> Result<()> {
    if depth.is_some_and(|d| d <= Exponent::from_integer(0)) {
        return Err(Error::Parse("depth must be positive".into()));
    }
    if let Ok(mut d) = DEPTH_OVERRIDE.write() {
        *d = depth;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Puiseux {
    /// Strictly increasing exponents, nonzero coefficients, all below `certified`.
    terms: Vec<(Exponent, Rational)>,
    /// `None` when exact.
    certified: Option<Exponent>,
}

fn min_window(a: Option<Exponent>, b: Option<Exponent>) -> Option<Exponent> {
    match (a, b) {
        (None, w) | (w, None) => w,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

fn below(e: &Exponent, window: Option<Exponent>) -> bool {
    window.map_or(true, |w| *e < w)
}

impl Puiseux {
    pub fn zero() -> Self {
        Puiseux {
            terms: Vec::new(),
            certified: None,
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, Exponent::zero())
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::constant(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn monomial(c: Rational, e: Exponent) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Puiseux {
            terms: vec![(e, c)],
            certified: None,
        }
    }

    /// `t^e`.
    pub fn t_pow(e: Exponent) -> Self {
        Self::monomial(Rational::one(), e)
    }

    /// `t^(num/den)`.
    pub fn t_frac(num: i64, den: i64) -> Self {
        Self::t_pow(Exponent::new(num, den))
    }

    pub fn t() -> Self {
        Self::t_frac(1, 1)
    }

    /// Builds an element from arbitrary terms: sorts, merges equal exponents,
    /// drops zero coefficients and anything at or beyond the window.
    pub fn from_terms<I>(terms: I, certified: Option<Exponent>) -> Self
    where
        I: IntoIterator<Item = (Exponent, Rational)>,
    {
        let mut acc: BTreeMap<Exponent, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if below(&e, certified) {
                *acc.entry(e).or_insert_with(Rational::zero) += c;
            }
        }
        Self::from_map(acc, certified)
    }

    fn from_map(acc: BTreeMap<Exponent, Rational>, certified: Option<Exponent>) -> Self {
        let terms = acc
            .into_iter()
            .filter(|(e, c)| !c.is_zero() && below(e, certified))
            .collect();
        Puiseux { terms, certified }
    }

    /// Marks `terms` as certified only below `t^window`.
    pub fn truncated<I>(terms: I, window: Exponent) -> Self
    where
        I: IntoIterator<Item = (Exponent, Rational)>,
    {
        Self::from_terms(terms, Some(window))
    }

    pub fn terms(&self) -> &[(Exponent, Rational)] {
        &self.terms
    }

    pub fn certified_order(&self) -> Option<Exponent> {
        self.certified
    }

    pub fn is_exact(&self) -> bool {
        self.certified.is_none()
    }

    /// Least common denominator of all exponents (and of the window).
    pub fn ramification(&self) -> i64 {
        self.terms
            .iter()
            .map(|(e, _)| *e.denom())
            .chain(self.certified.map(|w| *w.denom()))
            .fold(1, |acc, d| acc.lcm(&d))
    }

    pub fn leading(&self) -> Option<(&Exponent, &Rational)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    /// Largest stored exponent.
    pub fn top_exponent(&self) -> Option<Exponent> {
        self.terms.last().map(|(e, _)| *e)
    }

    /// The t-adic order; `None` for an exact zero.
    pub fn ord(&self) -> Result<Option<Exponent>> {
        match self.terms.first() {
            Some((e, _)) => Ok(Some(*e)),
            None if self.is_exact() => Ok(None),
            None => Err(Error::precision(format!(
                "order of {} is not certified",
                self
            ))),
        }
    }

    /// Order of a certified nonzero element.
    pub fn ord_nonzero(&self) -> Result<Exponent> {
        self.ord()?.ok_or(Error::DivisionByZero)
    }

    /// A lower bound for the order (`None` means +infinity).
    pub fn ord_lower_bound(&self) -> Option<Exponent> {
        self.terms.first().map(|(e, _)| *e).or(self.certified)
    }

    pub fn is_zero_checked(&self) -> Result<bool> {
        if !self.terms.is_empty() {
            Ok(false)
        } else if self.is_exact() {
            Ok(true)
        } else {
            Err(Error::precision(format!(
                "cannot decide whether {} is zero",
                self
            )))
        }
    }

    /// Exact structural zero (an exact element with no terms).
    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.is_exact()
    }

    pub fn is_exact_one(&self) -> bool {
        self.is_exact()
            && self.terms.len() == 1
            && self.terms[0].0.is_zero()
            && self.terms[0].1.is_one()
    }

    /// Sign; the leading coefficient decides because `t` is infinitesimal.
    pub fn signum(&self) -> Result<Ordering> {
        match self.terms.first() {
            Some((_, c)) => Ok(if c.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            }),
            None if self.is_exact() => Ok(Ordering::Equal),
            None => Err(Error::precision(format!(
                "sign of {} is not certified",
                self
            ))),
        }
    }

    pub fn is_positive(&self) -> Result<bool> {
        Ok(self.signum()? == Ordering::Greater)
    }

    pub fn compare(&self, other: &Self) -> Result<Ordering> {
        (self - other).signum()
    }

    /// True when `self - other` vanishes through its certified window.
    pub fn agrees_with(&self, other: &Self) -> bool {
        (self - other).terms.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Puiseux {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
            certified: self.certified,
        }
    }

    /// Multiplication by `t^e`.
    pub fn shift(&self, e: Exponent) -> Self {
        Puiseux {
            terms: self.terms.iter().map(|(x, c)| (x + e, c.clone())).collect(),
            certified: self.certified.map(|w| w + e),
        }
    }

    /// Lowers the certified window to `w`.
    pub fn truncate(&self, w: Exponent) -> Self {
        Self::from_terms(
            self.terms.iter().cloned(),
            min_window(self.certified, Some(w)),
        )
    }

    /// Forgets every term at or above `t^w` and declares the remainder
    /// exact. Only sound where the caller knows those terms cannot matter.
    pub fn discard_from(&self, w: Exponent) -> Self {
        Puiseux {
            terms: self.terms.iter().filter(|(e, _)| *e < w).cloned().collect(),
            certified: None,
        }
    }

    /// Drops the window, keeping the stored terms.
    pub fn as_exact(&self) -> Self {
        Puiseux {
            terms: self.terms.clone(),
            certified: None,
        }
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        let window = min_window(self.certified, other.certified);
        let mut acc: BTreeMap<Exponent, Rational> = BTreeMap::new();
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            if below(e, window) {
                *acc.entry(*e).or_insert_with(Rational::zero) += c;
            }
        }
        Self::from_map(acc, window)
    }

    pub fn neg_ref(&self) -> Self {
        Puiseux {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            certified: self.certified,
        }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero();
        }
        let window = {
            let a = match (self.ord_lower_bound(), other.certified) {
                (Some(lb), Some(w)) => Some(lb + w),
                _ => None,
            };
            let b = match (other.ord_lower_bound(), self.certified) {
                (Some(lb), Some(w)) => Some(lb + w),
                _ => None,
            };
            min_window(a, b)
        };
        let mut acc: BTreeMap<Exponent, Rational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1 + e2;
                if !below(&e, window) {
                    // terms of `other` are increasing, so the rest are out too
                    break;
                }
                *acc.entry(e).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        Self::from_map(acc, window)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Splits a certified nonzero element as `c * t^v * (1 + u)` and returns
    /// `(c, v, u)` with `u` carrying a relative window.
    fn normalize(&self) -> Result<(Rational, Exponent, Puiseux)> {
        let (v, c) = match self.terms.first() {
            Some((v, c)) => (*v, c.clone()),
            None if self.is_exact() => return Err(Error::DivisionByZero),
            None => return Err(Error::precision(format!("{} may be zero", self))),
        };
        let inv_c = c.recip();
        let u = Puiseux {
            terms: self.terms[1..]
                .iter()
                .map(|(e, a)| (e - v, a * &inv_c))
                .collect(),
            certified: self.certified.map(|w| w - v),
        };
        Ok((c, v, u))
    }

    /// Multiplicative inverse, exact for monomials and otherwise certified
    /// to relative depth `depth` (or the input's own relative precision if
    /// that is smaller).
    pub fn inverse(&self, depth: Exponent) -> Result<Self> {
        let (c, v, u) = self.normalize()?;
        let inv_c = c.recip();
        if u.is_exact_zero() {
            return Ok(Self::monomial(inv_c, -v));
        }
        let rel = min_window(Some(depth), u.certified).expect("window is finite");
        let neg_u = u.truncate(rel).neg_ref();
        // (1 + u)^-1 = sum_j (-u)^j
        let mut sum = Self::one().truncate(rel);
        let mut power = Self::one();
        loop {
            power = (&power * &neg_u).truncate(rel);
            if power.terms.is_empty() {
                break;
            }
            sum = &sum + &power;
        }
        let result = sum.scale(&inv_c).shift(-v);
        Ok(self.promote_inverse(result))
    }

    fn promote_inverse(&self, candidate: Self) -> Self {
        if self.is_exact() {
            let exact = candidate.as_exact();
            if (self * &exact).is_exact_one() {
                return exact;
            }
        }
        candidate
    }

    /// Nonnegative square root. The leading coefficient must be the square of
    /// a rational; the backend has no other square roots of constants.
    pub fn sqrt(&self, depth: Exponent) -> Result<Self> {
        match self.signum()? {
            Ordering::Less => return Err(Error::NegativeRadicand),
            Ordering::Equal => return Ok(Self::zero()),
            Ordering::Greater => {}
        }
        let (c, v, u) = self.normalize()?;
        let root_c = rational_sqrt(&c)
            .ok_or_else(|| Error::NotSupported(format!("square root of {} is irrational", c)))?;
        let half_v = v / Exponent::from_integer(2);
        if u.is_exact_zero() {
            return Ok(Self::monomial(root_c, half_v));
        }
        let rel = min_window(Some(depth), u.certified).expect("window is finite");
        let u = u.truncate(rel);
        // binomial series for (1 + u)^(1/2)
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        let mut coef = Rational::one();
        let mut sum = Self::one().truncate(rel);
        let mut power = Self::one();
        let mut j: i64 = 0;
        loop {
            j += 1;
            coef = coef * (&half - Rational::from_integer(BigInt::from(j - 1)))
                / Rational::from_integer(BigInt::from(j));
            power = (&power * &u).truncate(rel);
            if power.terms.is_empty() {
                break;
            }
            sum = &sum + &power.scale(&coef);
        }
        let result = sum.scale(&root_c).shift(half_v);
        if self.is_exact() {
            let exact = result.as_exact();
            if &exact * &exact == *self {
                return Ok(exact);
            }
        }
        Ok(result)
    }

    /// `self / other` when the quotient is a finite exact series.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        if !self.is_exact() || !other.is_exact() || other.is_exact_zero() {
            return None;
        }
        if self.is_exact_zero() {
            return Some(Self::zero());
        }
        let (lo, hi) = (self.terms[0].0, self.top_exponent()?);
        let depth = hi - lo + Exponent::one();
        let q = (self * &other.inverse(depth).ok()?).as_exact();
        if &q * other == *self {
            Some(q)
        } else {
            None
        }
    }

    /// `self / other`: exact when the quotient is a finite series, otherwise
    /// certified to relative depth `depth`.
    pub fn divide(&self, other: &Self, depth: Exponent) -> Result<Self> {
        match self.div_exact(other) {
            Some(q) => Ok(q),
            None => Ok(self * &other.inverse(depth)?),
        }
    }

    /// Coefficient of `t^e`, if certified.
    pub fn coefficient(&self, e: Exponent) -> Result<Rational> {
        if !below(&e, self.certified) {
            return Err(Error::precision(format!(
                "coefficient of t^{} in {}",
                e, self
            )));
        }
        Ok(self
            .terms
            .iter()
            .find(|(x, _)| *x == e)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero))
    }
}

/// Rational square root when it exists.
pub fn rational_sqrt(c: &Rational) -> Option<Rational> {
    if c.is_negative() {
        return None;
    }
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    if &(&n * &n) == c.numer() && &(&d * &d) == c.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl $trait<&Puiseux> for &Puiseux {
            type Output = Puiseux;
            fn $method(self, rhs: &Puiseux) -> Puiseux {
                self.$inner(rhs)
            }
        }
        impl $trait<Puiseux> for Puiseux {
            type Output = Puiseux;
            fn $method(self, rhs: Puiseux) -> Puiseux {
                (&self).$inner(&rhs)
            }
        }
        impl $trait<&Puiseux> for Puiseux {
            type Output = Puiseux;
            fn $method(self, rhs: &Puiseux) -> Puiseux {
                (&self).$inner(rhs)
            }
        }
        impl $trait<Puiseux> for &Puiseux {
            type Output = Puiseux;
            fn $method(self, rhs: Puiseux) -> Puiseux {
                self.$inner(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for &Puiseux {
    type Output = Puiseux;
    fn neg(self) -> Puiseux {
        self.neg_ref()
    }
}

impl Neg for Puiseux {
    type Output = Puiseux;
    fn neg(self) -> Puiseux {
        self.neg_ref()
    }
}

impl From<i64> for Puiseux {
    fn from(c: i64) -> Self {
        Puiseux::from_int(c)
    }
}

impl From<Rational> for Puiseux {
    fn from(c: Rational) -> Self {
        Puiseux::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Puiseux {
        s.parse().unwrap()
    }

    fn depth(d: i64) -> Exponent {
        Exponent::from_integer(d)
    }

    #[test]
    fn add_examples() {
        assert!((p("t") + p("-t")).is_exact_zero());
        assert_eq!(p("1 + t") + p("t"), p("1 + 2*t"));
        let a = Puiseux::truncated(p("1 + t").terms().to_vec(), depth(2));
        let sum = &a + &p("t^3");
        assert_eq!(sum, a);
        assert_eq!(sum.certified_order(), Some(depth(2)));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(p("t^(1/2)") * p("t^(1/2)"), p("t"));
        assert_eq!(p("1 + t") * p("1 - t"), p("1 - t^2"));
        assert!((Puiseux::zero() * p("3 + t^(-7)")).is_exact_zero());
    }

    #[test]
    fn truncated_product_window() {
        // (1 + t + O(t^2)) * (t + O(t^3)) = t + t^2 + O(t^3)
        let a = p("1 + t + O(t^2)");
        let b = p("t + O(t^3)");
        let c = &a * &b;
        assert_eq!(c.certified_order(), Some(depth(3)));
        assert_eq!(c, p("t + t^2 + O(t^3)"));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(p("t").inverse(depth(8)).unwrap(), p("t^(-1)"));
        assert!(p("t").inverse(depth(8)).unwrap().is_exact());
        let inv = p("1 + t").inverse(depth(3)).unwrap();
        assert_eq!(inv, p("1 - t + t^2 + O(t^3)"));
        assert_eq!(
            Puiseux::zero().inverse(depth(3)),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn inverse_of_shifted_series_uses_relative_depth() {
        let inv = p("t^2 + t^3").inverse(depth(3)).unwrap();
        assert_eq!(inv, p("t^(-2) - t^(-1) + 1 + O(t)"));
    }

    #[test]
    fn compare_examples() {
        assert_eq!(p("t").compare(&p("t^2")).unwrap(), Ordering::Greater);
        let x = p("3 - t^(1/3)");
        assert_eq!(x.compare(&x).unwrap(), Ordering::Equal);
        let one_trunc = p("1 + O(t^2)");
        assert!(matches!(
            one_trunc.compare(&Puiseux::one()),
            Err(Error::PrecisionExhausted(_))
        ));
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(p("t^2").sqrt(depth(8)).unwrap(), p("t"));
        assert_eq!(
            p("1 + t").sqrt(depth(3)).unwrap(),
            p("1 + 1/2*t - 1/8*t^2 + O(t^3)")
        );
        assert_eq!(p("-1").sqrt(depth(8)), Err(Error::NegativeRadicand));
        assert!(matches!(p("2").sqrt(depth(8)), Err(Error::NotSupported(_))));
    }

    #[test]
    fn sqrt_promotes_perfect_squares_to_exact() {
        let r = p("1 + 2*t + t^2").sqrt(depth(8)).unwrap();
        assert_eq!(r, p("1 + t"));
        assert!(r.is_exact());
    }

    #[test]
    fn div_exact_only_when_divisible() {
        assert_eq!(p("1 - t^2").div_exact(&p("1 + t")), Some(p("1 - t")));
        assert_eq!(p("1").div_exact(&p("1 + t")), None);
        assert_eq!(p("4*t^3").div_exact(&p("2*t")), Some(p("2*t^2")));
    }

    #[test]
    fn ramification_is_lcm_of_denominators() {
        assert_eq!(p("t^(1/2) + t^(2/3)").ramification(), 6);
        assert_eq!(p("1 + t").ramification(), 1);
    }
}
