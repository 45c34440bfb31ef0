use std::cmp::Ordering;

use super::puiseux::{Exponent, Puiseux};
use crate::error::Result;
use crate::report::CheckReport;
use crate::sampling;

/// Ring and order axioms on random exact triples, and the residuals of
/// `inverse` and `sqrt` at relative depth `depth`.
pub fn field_axioms_check(sample_size: usize, depth: Exponent, seed: u64) -> CheckReport {
    let mut report = CheckReport::new("field axioms");
    for i in 0..sample_size {
        let mut rng = sampling::rng_for(seed, i as u64);
        let a = sampling::puiseux(&mut rng, 4);
        let b = sampling::puiseux(&mut rng, 4);
        let c = sampling::puiseux(&mut rng, 4);
        report.run(&format!("triple {}", i), |rep| {
            check_triple(rep, &a, &b, &c)?;
            check_residuals(rep, &a, depth)
        });
    }
    report
}

fn check_triple(rep: &mut CheckReport, a: &Puiseux, b: &Puiseux, c: &Puiseux) -> Result<()> {
    let zero = Puiseux::zero();
    let one = Puiseux::one();
    let show = || format!("({}, {}, {})", a, b, c);
    rep.check(a + b == b + a, || format!("a + b != b + a at {}", show()));
    rep.check(a * b == b * a, || format!("ab != ba at {}", show()));
    rep.check(&(a + b) + c == a + &(b + c), || {
        format!("+ not associative at {}", show())
    });
    rep.check(&(a * b) * c == a * &(b * c), || {
        format!("* not associative at {}", show())
    });
    rep.check(a * &(b + c) == &(a * b) + &(a * c), || {
        format!("not distributive at {}", show())
    });
    rep.check(a + &zero == *a && a * &one == *a, || {
        format!("identities fail at {}", a)
    });
    rep.check((a + &(-a)).is_exact_zero(), || {
        format!("a - a != 0 at {}", a)
    });

    // exactly one of <, =, >; antisymmetry of compare
    let ab = a.compare(b)?;
    rep.check(ab == b.compare(a)?.reverse(), || {
        format!("compare not antisymmetric at {}", show())
    });
    rep.check((ab == Ordering::Equal) == (a == b), || {
        format!("trichotomy fails at {}", show())
    });
    let bc = b.compare(c)?;
    if ab != Ordering::Greater && bc != Ordering::Greater {
        rep.check(a.compare(c)? != Ordering::Greater, || {
            format!("not transitive at {}", show())
        });
    }
    // compatibility with + and *
    rep.check((a + c).compare(&(b + c))? == ab, || {
        format!("+ not monotone at {}", show())
    });
    if a.is_positive()? && b.is_positive()? {
        rep.check((a * b).is_positive()?, || {
            format!("product of positives at {}", show())
        });
    }
    Ok(())
}

fn check_residuals(rep: &mut CheckReport, a: &Puiseux, depth: Exponent) -> Result<()> {
    if a.is_exact_zero() {
        return Ok(());
    }
    let inv = a.inverse(depth)?;
    let r = &(a * &inv) - &Puiseux::one();
    rep.check(
        r.terms().is_empty() && r.certified_order().map_or(true, |w| w >= depth),
        || format!("a·a⁻¹ - 1 = {} for a = {}", r, a),
    );

    // make the leading coefficient a square so the root is in the backend
    let pos = if a.is_positive()? { a.clone() } else { -a };
    let lead = pos.leading().map(|(_, c)| c.clone()).expect("nonzero");
    let sq = pos.scale(&lead);
    let s = sq.sqrt(depth)?;
    let r = &(&s * &s) - &sq;
    let want = sq.ord_nonzero()? + depth;
    rep.check(
        r.terms().is_empty() && r.certified_order().map_or(true, |w| w >= want),
        || format!("s² - x = {} for x = {}", r, sq),
    );
    rep.check(s.is_positive()?, || {
        format!("root of {} is not positive", sq)
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sample_passes() {
        let r = field_axioms_check(200, Exponent::from_integer(8), 1);
        assert!(r.passed(), "{}", r);
    }
}
