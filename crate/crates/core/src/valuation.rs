//! The convex valuation ring `O = {r : ord_t(r) ≥ 0}`, its maximal ideal
//! `M = {r : ord_t(r) > 0}` and the residue map onto ℚ.
//!
//! [`ValuationRing`] is the interface; [`TAdic`] is the one shipped backend.
//! Its residue field embeds back into `O` as the constant series, which
//! gives a canonical splitting `O = ℚ ⊕ M` that a general real closed field
//! would not provide.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact_fields::{default_depth, Exponent, Puiseux, Rational};
use crate::log_value::ValueGroupElement;
use crate::report::CheckReport;
use crate::sampling;

/// `ν(r)`, with `ν(0) = ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(ValueGroupElement),
    Infinite,
}

impl Valuation {
    pub fn finite(&self) -> Option<ValueGroupElement> {
        match self {
            Valuation::Finite(v) => Some(*v),
            Valuation::Infinite => None,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{}", v),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

pub trait ValuationRing {
    fn valuate(&self, r: &Puiseux) -> Result<Valuation>;

    fn is_in_o(&self, r: &Puiseux) -> Result<bool>;

    fn is_in_maximal_ideal(&self, r: &Puiseux) -> Result<bool>;

    fn is_unit(&self, r: &Puiseux) -> Result<bool> {
        Ok(self.is_in_o(r)? && !self.is_in_maximal_ideal(r)?)
    }

    /// Image in the residue field; `NotInRing` outside `O`.
    fn residue(&self, r: &Puiseux) -> Result<Rational>;
}

/// The t-adic valuation ring of the Puiseux backend.
#[derive(Clone, Copy, Debug, Default)]
pub struct TAdic;

impl TAdic {
    /// Compares the order of `r` with zero using only certified data.
    fn order_sign(&self, r: &Puiseux) -> Result<Option<Ordering>> {
        match r.terms().first() {
            Some((e, _)) => Ok(Some(e.cmp(&Exponent::zero()))),
            None => match r.certified_order() {
                None => Ok(None),
                Some(w) if w > Exponent::zero() => Ok(Some(Ordering::Greater)),
                Some(_) => Err(Error::precision(format!(
                    "valuation of {} is not certified",
                    r
                ))),
            },
        }
    }
}

impl ValuationRing for TAdic {
    fn valuate(&self, r: &Puiseux) -> Result<Valuation> {
        Ok(match r.ord()? {
            Some(e) => Valuation::Finite(ValueGroupElement(e)),
            None => Valuation::Infinite,
        })
    }

    fn is_in_o(&self, r: &Puiseux) -> Result<bool> {
        Ok(self.order_sign(r)?.map_or(true, |s| s != Ordering::Less))
    }

    fn is_in_maximal_ideal(&self, r: &Puiseux) -> Result<bool> {
        Ok(self.order_sign(r)?.map_or(true, |s| s == Ordering::Greater))
    }

    fn residue(&self, r: &Puiseux) -> Result<Rational> {
        if !self.is_in_o(r)? {
            return Err(Error::NotInRing);
        }
        r.coefficient(Exponent::zero())
    }
}

pub fn valuate(r: &Puiseux) -> Result<Valuation> {
    TAdic.valuate(r)
}

pub fn is_in_o(r: &Puiseux) -> Result<bool> {
    TAdic.is_in_o(r)
}

pub fn is_in_maximal_ideal(r: &Puiseux) -> Result<bool> {
    TAdic.is_in_maximal_ideal(r)
}

pub fn is_unit(r: &Puiseux) -> Result<bool> {
    TAdic.is_unit(r)
}

pub fn residue(r: &Puiseux) -> Result<Rational> {
    TAdic.residue(r)
}

/// Moves `r` into `O` by a monomial shift (a no-op for elements already there).
fn into_ring(r: &Puiseux) -> Puiseux {
    match r.ord() {
        Ok(Some(e)) if e < Exponent::zero() => r.shift(-e),
        _ => r.clone(),
    }
}

/// Samples exact elements and checks multiplicativity, the ultrametric
/// inequality, o-convexity, the complement-inverse law and the residue
/// homomorphism.
pub fn valuation_axioms_check(sample_size: usize, seed: u64) -> CheckReport {
    let mut report = CheckReport::new("valuation axioms");
    for i in 0..sample_size {
        let mut rng = sampling::rng_for(seed, i as u64);
        let a = sampling::puiseux(&mut rng, 4);
        let b = sampling::puiseux(&mut rng, 4);
        report.run(&format!("sample {}", i), |rep| check_pair(rep, &a, &b));
    }
    report
}

fn check_pair(rep: &mut CheckReport, a: &Puiseux, b: &Puiseux) -> Result<()> {
    let (va, vb) = (valuate(a)?, valuate(b)?);
    let vab = valuate(&(a * b))?;
    rep.check(vab == va + vb, || {
        format!("nu({} * {}) = {} != {} + {}", a, b, vab, va, vb)
    });
    let vsum = valuate(&(a + b))?;
    rep.check(vsum >= va.min(vb), || {
        format!("nu({} + {}) = {} < min({}, {})", a, b, vsum, va, vb)
    });

    if !a.is_exact_zero() && !b.is_exact_zero() {
        // o-convexity on 0 < p <= q
        let abs = |x: &Puiseux| {
            if x.is_positive().unwrap_or(true) {
                x.clone()
            } else {
                -x
            }
        };
        let (p, q) = (abs(a), abs(&into_ring(b)));
        let (p, q) = if p.compare(&q)? == Ordering::Greater {
            (q, p)
        } else {
            (p, q)
        };
        if is_in_o(&q)? {
            rep.check(is_in_o(&p)?, || {
                format!("0 < {} <= {} in O but {} not in O", p, q, p)
            });
        }
        // complement-inverse
        if !is_in_o(a)? {
            let inv = a.inverse(default_depth())?;
            rep.check(is_in_maximal_ideal(&inv)?, || {
                format!("{} not in O but its inverse {} is not in M", a, inv)
            });
        }
    }

    // residue is a ring homomorphism with kernel M
    let (x, y) = (into_ring(a), into_ring(b));
    let (rx, ry) = (residue(&x)?, residue(&y)?);
    let r_sum = residue(&(&x + &y))?;
    rep.check(r_sum == &rx + &ry, || {
        format!("res({} + {}) = {}", x, y, r_sum)
    });
    let r_prod = residue(&(&x * &y))?;
    rep.check(r_prod == &rx * &ry, || {
        format!("res({} * {}) = {}", x, y, r_prod)
    });
    rep.check(rx.is_zero() == is_in_maximal_ideal(&x)?, || {
        format!("res({}) = {} disagrees with membership in M", x, rx)
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Puiseux {
        s.parse().unwrap()
    }

    fn fin(n: i64) -> Valuation {
        Valuation::Finite(ValueGroupElement::from_integer(n))
    }

    #[test]
    fn valuate_examples() {
        assert_eq!(valuate(&p("t^2")).unwrap(), fin(2));
        assert_eq!(valuate(&p("3 + t")).unwrap(), fin(0));
        assert_eq!(valuate(&Puiseux::zero()).unwrap(), Valuation::Infinite);
    }

    #[test]
    fn ring_membership_examples() {
        assert!(!is_in_o(&p("t^-1")).unwrap());
        assert!(is_in_o(&p("t")).unwrap());
        assert!(is_unit(&p("2 + t")).unwrap());
        assert_eq!(
            residue(&p("2 + t")).unwrap(),
            Rational::from_integer(2.into())
        );
        assert_eq!(residue(&p("t^-1")), Err(Error::NotInRing));
    }

    #[test]
    fn truncated_elements_use_only_certified_data() {
        assert!(is_in_maximal_ideal(&p("O(t^2)")).unwrap());
        assert!(is_in_o(&p("O(t^(-1))")).is_err());
        assert!(residue(&p("1 + O(t)")).is_ok());
        assert!(residue(&p("O(t^0)")).is_err());
    }

    #[test]
    fn axiom_check_examples() {
        assert_eq!(valuate(&(p("t") * p("t^3"))).unwrap(), fin(4));
        assert_eq!(valuate(&(p("t") + p("t"))).unwrap(), fin(1));
        assert_eq!(valuate(&(p("t") - p("t"))).unwrap(), Valuation::Infinite);
        let report = valuation_axioms_check(100, 1);
        assert!(report.passed(), "{}", report);
    }
}
