//! The ordered group Λ of formal logarithms of positive field elements,
//! written additively, and its archimedean quotient Γ = Λ/Ω.
//!
//! A [`LogElement`] is stored through its positive carrier `r`, standing for
//! `lg r`; the group law is multiplication of carriers and the order is the
//! order of carriers. The convex subgroup Ω is the set of `lg u` for positive
//! units `u` of the valuation ring, and [`LogElement::quotient_map`] is the
//! projection onto Γ ≅ (ℚ, +), normalized so that `lg t⁻¹ ↦ 1`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact_fields::{Exponent, Puiseux};

/// Element of Γ = Λ/Ω, realized as a rational number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ValueGroupElement(pub Exponent);

impl ValueGroupElement {
    pub fn zero() -> Self {
        ValueGroupElement(Exponent::zero())
    }

    pub fn new(num: i64, den: i64) -> Self {
        ValueGroupElement(Exponent::new(num, den))
    }

    pub fn from_integer(n: i64) -> Self {
        ValueGroupElement(Exponent::from_integer(n))
    }

    pub fn value(&self) -> Exponent {
        self.0
    }

    pub fn abs(&self) -> Self {
        ValueGroupElement(self.0.abs())
    }
}

impl Add for ValueGroupElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        ValueGroupElement(self.0 + rhs.0)
    }
}

impl Sub for ValueGroupElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        ValueGroupElement(self.0 - rhs.0)
    }
}

impl Neg for ValueGroupElement {
    type Output = Self;
    fn neg(self) -> Self {
        ValueGroupElement(-self.0)
    }
}

impl std::iter::Sum for ValueGroupElement {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl fmt::Display for ValueGroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::str::FromStr for ValueGroupElement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |x: &str| {
            x.trim()
                .parse::<i64>()
                .map_err(|e| Error::Parse(format!("{:?}: {}", s, e)))
        };
        let value = match s.split_once('/') {
            Some((n, d)) => {
                let d = parse(d)?;
                if d == 0 {
                    return Err(Error::Parse(format!("{:?}: zero denominator", s)));
                }
                Exponent::new(parse(n)?, d)
            }
            None => Exponent::from_integer(parse(s)?),
        };
        Ok(ValueGroupElement(value))
    }
}

impl Serialize for ValueGroupElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ValueGroupElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// `lg r` for a positive carrier `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogElement {
    carrier: Puiseux,
}

/// Archimedean class of a nonzero element of Λ. Within a class any two
/// elements bound each other up to an integer multiple; classes are ordered
/// so that every element of a smaller class is infinitely smaller.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArchimedeanClass {
    Zero,
    /// `lg(1 + c t^w + ...)` with `w > 0`; larger `w` is a smaller class.
    Infinitesimal(Exponent),
    /// `lg c + (infinitesimal)` for a rational `c ≠ 1`.
    Standard,
    /// Carriers of nonzero t-adic order: the class of `lg t⁻¹`.
    Infinite,
}

impl ArchimedeanClass {
    fn rank(&self) -> (u8, Exponent) {
        match self {
            ArchimedeanClass::Zero => (0, Exponent::zero()),
            ArchimedeanClass::Infinitesimal(w) => (1, -*w),
            ArchimedeanClass::Standard => (2, Exponent::zero()),
            ArchimedeanClass::Infinite => (3, Exponent::zero()),
        }
    }
}

impl PartialOrd for ArchimedeanClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ArchimedeanClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

/// Position of `|x|` relative to the truncations at `alpha`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    /// `|x| ≪ alpha`.
    InLower,
    /// `|x| ≤ n·alpha` for some `n`, but not `|x| ≪ alpha`.
    InUpper,
    /// `|x| ≫ alpha`.
    Neither,
}

impl LogElement {
    pub fn lg(carrier: Puiseux) -> Result<Self> {
        if !carrier.is_positive()? {
            return Err(Error::InvalidPoint(format!(
                "lg of non-positive element {}",
                carrier
            )));
        }
        Ok(LogElement { carrier })
    }

    pub fn zero() -> Self {
        LogElement {
            carrier: Puiseux::one(),
        }
    }

    /// `lg t^e`.
    pub fn lg_t_pow(e: Exponent) -> Self {
        LogElement {
            carrier: Puiseux::t_pow(e),
        }
    }

    /// The distinguished large element `lg t⁻¹`.
    pub fn alpha() -> Self {
        Self::lg_t_pow(-Exponent::one())
    }

    pub fn carrier(&self) -> &Puiseux {
        &self.carrier
    }

    pub fn log_add(&self, other: &Self) -> Self {
        LogElement {
            carrier: &self.carrier * &other.carrier,
        }
    }

    pub fn negate(&self, depth: Exponent) -> Result<Self> {
        Ok(LogElement {
            carrier: self.carrier.inverse(depth)?,
        })
    }

    pub fn compare(&self, other: &Self) -> Result<Ordering> {
        self.carrier.compare(&other.carrier)
    }

    pub fn signum(&self) -> Result<Ordering> {
        self.carrier.compare(&Puiseux::one())
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(self.signum()? == Ordering::Equal)
    }

    /// `|lg r| = lg max(r, r⁻¹)`.
    pub fn log_abs(&self, depth: Exponent) -> Result<Self> {
        match self.signum()? {
            Ordering::Less => self.negate(depth),
            _ => Ok(self.clone()),
        }
    }

    /// Image in Γ: `lg r ↦ -ord_t(r)`.
    pub fn quotient_map(&self) -> Result<ValueGroupElement> {
        Ok(ValueGroupElement(-self.carrier.ord_nonzero()?))
    }

    pub fn archimedean_class(&self) -> Result<ArchimedeanClass> {
        if self.is_zero()? {
            return Ok(ArchimedeanClass::Zero);
        }
        let (v, c) = self
            .carrier
            .leading()
            .map(|(v, c)| (*v, c.clone()))
            .expect("positive carrier");
        if !v.is_zero() {
            return Ok(ArchimedeanClass::Infinite);
        }
        if !c.is_one() {
            return Ok(ArchimedeanClass::Standard);
        }
        let rest = &self.carrier - &Puiseux::one();
        match rest.ord()? {
            Some(w) => Ok(ArchimedeanClass::Infinitesimal(w)),
            None => Ok(ArchimedeanClass::Zero),
        }
    }

    /// Classifies `self` against the truncations of Λ at `alpha > 0`.
    pub fn in_truncation(&self, alpha: &LogElement) -> Result<Truncation> {
        if alpha.signum()? != Ordering::Greater {
            return Err(Error::InvalidPoint(
                "truncation parameter must be positive".into(),
            ));
        }
        let mine = self.archimedean_class()?;
        let theirs = alpha.archimedean_class()?;
        Ok(match mine.cmp(&theirs) {
            Ordering::Less => Truncation::InLower,
            Ordering::Equal => Truncation::InUpper,
            Ordering::Greater => Truncation::Neither,
        })
    }

    /// Membership in Ω = Λ_⟨lg t⁻¹⟩.
    pub fn in_omega(&self) -> Result<bool> {
        Ok(self.in_truncation(&Self::alpha())? == Truncation::InLower)
    }
}

impl fmt::Display for LogElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lg({})", self.carrier)
    }
}

impl Serialize for LogElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_fields::default_depth;

    fn lg(s: &str) -> LogElement {
        LogElement::lg(s.parse().unwrap()).unwrap()
    }

    fn g(n: i64, d: i64) -> ValueGroupElement {
        ValueGroupElement::new(n, d)
    }

    #[test]
    fn log_add_examples() {
        assert!(lg("t").log_add(&lg("t^(-1)")).is_zero().unwrap());
        assert_eq!(lg("t^(-1)").log_add(&lg("t^(-1)")), lg("t^(-2)"));
        assert_eq!(lg("2").log_add(&lg("3")), lg("6"));
    }

    #[test]
    fn log_abs_examples() {
        let d = default_depth();
        assert_eq!(lg("t").log_abs(d).unwrap(), lg("t^(-1)"));
        assert!(lg("1").log_abs(d).unwrap().is_zero().unwrap());
        assert_eq!(lg("t^(-2)").log_abs(d).unwrap(), lg("t^(-2)"));
    }

    #[test]
    fn quotient_map_examples() {
        assert_eq!(lg("t^(-1)").quotient_map().unwrap(), g(1, 1));
        assert_eq!(lg("5").quotient_map().unwrap(), g(0, 1));
        assert_eq!(lg("t^(3/2)").quotient_map().unwrap(), g(-3, 2));
    }

    #[test]
    fn truncation_examples() {
        let alpha = LogElement::alpha();
        assert_eq!(lg("7").in_truncation(&alpha).unwrap(), Truncation::InLower);
        assert_eq!(
            lg("t^(-3)").in_truncation(&alpha).unwrap(),
            Truncation::InUpper
        );
        assert_eq!(
            LogElement::zero().in_truncation(&alpha).unwrap(),
            Truncation::InLower
        );
    }

    #[test]
    fn truncation_at_a_standard_alpha_sees_finer_classes() {
        let alpha = lg("2");
        assert_eq!(
            lg("t^(-1)").in_truncation(&alpha).unwrap(),
            Truncation::Neither
        );
        assert_eq!(
            lg("1 + t").in_truncation(&alpha).unwrap(),
            Truncation::InLower
        );
        assert_eq!(
            lg("1/3").in_truncation(&alpha).unwrap(),
            Truncation::InUpper
        );
        let small = lg("1 + t");
        assert_eq!(
            lg("1 + t^2").in_truncation(&small).unwrap(),
            Truncation::InLower
        );
        assert_eq!(
            lg("1 - 5*t").in_truncation(&small).unwrap(),
            Truncation::InUpper
        );
    }

    #[test]
    fn value_group_serializes_as_fraction() {
        assert_eq!(g(-3, 2).to_string(), "-3/2");
        assert_eq!(g(4, 2).to_string(), "2");
        assert_eq!("-3/2".parse::<ValueGroupElement>().unwrap(), g(-3, 2));
        assert!("1/0".parse::<ValueGroupElement>().is_err());
    }
}
