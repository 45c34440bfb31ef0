//! Sampled property suites for the metric and for Kostant convexity.

use std::cmp::Ordering;

use rand::seq::SliceRandom;

use super::iwasawa::kostant_instance;
use super::{lambda_distance, triangle_via_retraction, valuation_distance, PDPoint};
use crate::error::Result;
use crate::exact_fields::PMatrix;
use crate::report::CheckReport;
use crate::sampling::{self, SampleRng};

fn permuted_diagonal(d: &PMatrix, perm: &[usize]) -> PMatrix {
    PMatrix::diagonal(perm.iter().map(|&i| d[(i, i)].clone()).collect())
}

/// Valuation-level metric laws on random points of `P_n`, and the triangle
/// inequality once more through the retraction argument.
fn valuation_laws(rep: &mut CheckReport, rng: &mut SampleRng, n: usize) -> Result<()> {
    let p = PDPoint::new(sampling::pd_matrix(rng, n))?;
    let q = PDPoint::new(sampling::pd_matrix(rng, n))?;
    let r = PDPoint::new(sampling::pd_matrix(rng, n))?;
    let steps = 3;
    let g = sampling::sl_element(rng, n, steps);

    let d_pq = valuation_distance(&p, &q)?;
    let d_qp = valuation_distance(&q, &p)?;
    rep.check(d_pq == d_qp, || {
        format!(
            "d(P,Q) = {} but d(Q,P) = {} for P = {}, Q = {}",
            d_pq, d_qp, p, q
        )
    });
    let d_pp = valuation_distance(&p, &p)?;
    rep.check(d_pp.value() == 0.into(), || {
        format!("d(P,P) = {} for P = {}", d_pp, p)
    });
    let moved = valuation_distance(&p.act(&g)?, &q.act(&g)?)?;
    rep.check(moved == d_pq, || {
        format!(
            "d(gP,gQ) = {} != d(P,Q) = {} for P = {}, Q = {}",
            moved, d_pq, p, q
        )
    });
    let (d_qr, d_pr) = (valuation_distance(&q, &r)?, valuation_distance(&p, &r)?);
    rep.check(d_pr <= d_pq + d_qr, || {
        format!(
            "d(P,R) = {} > {} + {} for P = {}, Q = {}, R = {}",
            d_pr, d_pq, d_qr, p, q, r
        )
    });

    let h = sampling::sl_element(rng, n, steps);
    let x = PDPoint::new(sampling::positive_diagonal(rng, n, 2))?;
    let z = PDPoint::new(sampling::positive_diagonal(rng, n, 2))?;
    let w = triangle_via_retraction(&h, &x, &z, &q)?;
    rep.check(w.holds(), || {
        format!(
            "retraction argument failed: {:?} (h = {:?}, X = {}, Z = {}, Q = {})",
            w,
            h.to_rows(),
            x,
            z,
            q
        )
    });
    Ok(())
}

/// Λ-level laws on a family whose eigenvalues are monomials: diagonal
/// points moved by a common `g`.
fn lambda_laws(rep: &mut CheckReport, rng: &mut SampleRng, n: usize) -> Result<()> {
    let ds: Vec<PMatrix> = (0..3)
        .map(|_| sampling::positive_diagonal(rng, n, 2))
        .collect();
    let g = sampling::sl_element(rng, n, 3);
    let flat: Vec<PDPoint> = ds
        .iter()
        .map(|d| PDPoint::new(d.clone()))
        .collect::<Result<_>>()?;
    let moved: Vec<PDPoint> = flat.iter().map(|x| x.act(&g)).collect::<Result<_>>()?;
    let (a, b, c) = (&moved[0], &moved[1], &moved[2]);

    let d_ab = lambda_distance(a, b)?;
    let d_ba = lambda_distance(b, a)?;
    rep.check(d_ab == d_ba, || {
        format!("lambda d(P,Q) = {} but d(Q,P) = {}", d_ab, d_ba)
    });
    rep.check(lambda_distance(a, a)?.is_zero()?, || {
        format!("lambda d(P,P) != 0 for P = {}", a)
    });
    rep.check(d_ab.is_zero()? == (ds[0] == ds[1]), || {
        format!(
            "lambda d(P,Q) = {} disagrees with P == Q for P = {}, Q = {}",
            d_ab, a, b
        )
    });
    let base = lambda_distance(&flat[0], &flat[1])?;
    rep.check(base == d_ab, || {
        format!("lambda distance not invariant: {} vs {}", base, d_ab)
    });

    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let one = PDPoint::identity(n);
    let x = &flat[0];
    let px = PDPoint::new(permuted_diagonal(&ds[0], &perm))?;
    let (d1, d2) = (lambda_distance(&one, x)?, lambda_distance(&one, &px)?);
    rep.check(d1 == d2, || {
        format!(
            "Weyl invariance: d(1,X) = {} but d(1,wX) = {} (w = {:?})",
            d1, d2, perm
        )
    });

    let (d_bc, d_ac) = (lambda_distance(b, c)?, lambda_distance(a, c)?);
    let sum = d_ab.log_add(&d_bc);
    rep.check(d_ac.compare(&sum)? != Ordering::Greater, || {
        format!("lambda triangle: d(P,R) = {} > {} + {}", d_ac, d_ab, d_bc)
    });
    let vd = valuation_distance(a, b)?;
    rep.check(d_ab.quotient_map()? == vd, || {
        format!("quotient of {} is not the valuation distance {}", d_ab, vd)
    });
    Ok(())
}

/// Metric laws for `samples` random instances in dimension `n`.
pub fn metric_suite(n: usize, samples: usize, seed: u64) -> CheckReport {
    let mut report = CheckReport::new(format!("metric on P_{}", n));
    for i in 0..samples {
        let mut rng = sampling::rng_for(seed, i as u64);
        report.run(&format!("sample {} (valuation)", i), |rep| {
            valuation_laws(rep, &mut rng, n)
        });
        report.run(&format!("sample {} (lambda)", i), |rep| {
            lambda_laws(rep, &mut rng, n)
        });
    }
    report
}

/// Kostant convexity on `samples` random pairs `(k, a)` in dimension `n`.
pub fn kostant_suite(n: usize, samples: usize, seed: u64) -> CheckReport {
    let mut report = CheckReport::new(format!("kostant convexity, n = {}", n));
    for i in 0..samples {
        let mut rng = sampling::rng_for(seed, i as u64);
        let a = sampling::positive_diagonal(&mut rng, n, 3);
        let k = sampling::to_field(&sampling::rational_orthogonal(&mut rng, n));
        report.run(&format!("sample {}", i), |rep| {
            kostant_instance(rep, &a, &k)
        });
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for n in 2..=3 {
            let r = metric_suite(n, 10, 5);
            assert!(r.passed(), "{}", r);
            let r = kostant_suite(n, 10, 5);
            assert!(r.passed(), "{}", r);
        }
    }
}
