//! Randomized checks of the apartment system axioms A1 to A6.
//!
//! Each sample index draws from its own random stream, so the report does
//! not depend on how rayon schedules the instances.

use std::fmt;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use super::bruhat::{common_apartment, sector_on_chart};
use super::chart::{
    apartment_through, is_dominant, model_distance, model_vector, AffineWeyl, ApartmentChart,
    ModelPoint, Sector,
};
use super::overlap::{generators, normalize, overlap, Overlap};
use super::{retract, scalar_distance, vector_distance, BuildingPoint};
use crate::error::Result;
use crate::exact_fields::{Exponent, PMatrix, Puiseux};
use crate::log_value::ValueGroupElement;
use crate::report::CheckReport;
use crate::sampling::{self, SampleRng};

pub const AXIOMS: [&str; 6] = ["A1", "A2", "A3", "A4", "A5", "A6"];

#[derive(Clone, Debug, Serialize)]
pub struct InstanceReport {
    pub index: usize,
    pub axiom: String,
    pub passed: bool,
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub summary: Vec<CheckReport>,
    pub instances: Vec<InstanceReport>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.summary.iter().all(CheckReport::passed)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "axioms n={} samples={} seed={}",
            self.n, self.samples, self.seed
        )?;
        for r in &self.summary {
            let status = if r.passed() { "ok" } else { "FAIL" };
            writeln!(f, "{} {}", status, r)?;
        }
        Ok(())
    }
}

fn model_point(rng: &mut SampleRng, n: usize, span: i64) -> ModelPoint {
    sampling::balanced_exponents(rng, n, span)
        .into_iter()
        .map(ValueGroupElement)
        .collect()
}

fn random_chart(rng: &mut SampleRng, n: usize) -> Result<ApartmentChart> {
    ApartmentChart::new(sampling::sl_element(rng, n, 3))
}

fn random_weyl(rng: &mut SampleRng, n: usize) -> AffineWeyl {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    AffineWeyl {
        perm,
        shift: model_point(rng, n, 2),
    }
}

fn upper_unipotent(rng: &mut SampleRng, n: usize) -> PMatrix {
    let mut u = PMatrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            u[(i, j)] =
                Puiseux::monomial(sampling::small_rational(rng), sampling::exponent(rng, 2));
        }
    }
    u
}

fn check_a1(rng: &mut SampleRng, n: usize, rep: &mut CheckReport) -> Result<()> {
    let f = random_chart(rng, n)?;
    let w = random_weyl(rng, n);
    rep.check(w.is_special(), || {
        format!("{:?} leaves the model hyperplane", w)
    });
    let g = f.compose(&w)?;
    for _ in 0..3 {
        let (c, c2) = (model_point(rng, n, 3), model_point(rng, n, 3));
        let same = g.point(&c)?.same_point(&f.point(&w.apply(&c))?)?;
        rep.check(same, || format!("chart∘w differs from chart at w({:?})", c));
        rep.check(
            model_distance(&w.apply(&c), &w.apply(&c2)) == model_distance(&c, &c2),
            || format!("{:?} is not an isometry", w),
        );
    }
    Ok(())
}

fn overlap_pair(
    rng: &mut SampleRng,
    n: usize,
    kind: usize,
) -> Result<(ApartmentChart, ApartmentChart)> {
    let f1 = random_chart(rng, n)?;
    let f2 = match kind % 4 {
        0 => f1.compose(&random_weyl(rng, n))?,
        1 => ApartmentChart::new(f1.frame().mul(&upper_unipotent(rng, n))?)?,
        2 => ApartmentChart::new(f1.frame().mul(&sampling::integral_unimodular(rng, n, 3))?)?,
        _ => f1.translate(&sampling::sl_element(rng, n, 2))?,
    };
    Ok((f1, f2))
}

fn tropical(
    p: &[ValueGroupElement],
    q: &[ValueGroupElement],
    lambda: Exponent,
    max: bool,
) -> ModelPoint {
    let x: Vec<Exponent> = p
        .iter()
        .zip(q)
        .map(|(a, b)| {
            let b = b.value() + lambda;
            if max {
                a.value().max(b)
            } else {
                a.value().min(b)
            }
        })
        .collect();
    normalize(&x)
}

/// The transitions of pieces of `ov` that agree with `locate` on `points`.
fn consistent_transitions(
    ov: &Overlap,
    f1: &ApartmentChart,
    f2: &ApartmentChart,
    points: &[ModelPoint],
) -> Result<Vec<AffineWeyl>> {
    let mut images = Vec::with_capacity(points.len());
    for c in points {
        images.push(f2.locate(&f1.point(c)?)?);
    }
    let mut out = Vec::new();
    for piece in &ov.pieces {
        let w = ov.transition(piece);
        if points
            .iter()
            .zip(&images)
            .all(|(c, img)| img.as_ref() == Some(&w.apply(c)))
        {
            out.push(w);
        }
    }
    Ok(out)
}

fn check_overlap(
    rng: &mut SampleRng,
    f1: &ApartmentChart,
    f2: &ApartmentChart,
    rep: &mut CheckReport,
) -> Result<Overlap> {
    let n = f1.n();
    let ov = overlap(f1, f2)?;
    // the membership formula agrees with locating points one by one
    let mut members = Vec::new();
    for _ in 0..8 {
        let c = model_point(rng, n, 4);
        let located = f2.contains(&f1.point(&c)?)?;
        rep.check(located == ov.contains(&c), || {
            format!("membership of {:?} disagrees", c)
        });
        if located {
            members.push(c);
        }
    }
    for c in ov.sample_points() {
        rep.check(ov.contains(&c), || {
            format!("piece generator {:?} not in the overlap", c)
        });
        members.push(c);
    }
    if members.is_empty() {
        return Ok(ov);
    }
    let ws = consistent_transitions(&ov, f1, f2, &members)?;
    rep.check(!ws.is_empty(), || {
        "no single Weyl element fits the overlap".into()
    });
    rep.check(ws.iter().all(AffineWeyl::is_special), || {
        "transition is not special".into()
    });

    // convexity: hull generators, midpoints and tropical segments stay inside
    if let Some(h) = ov.hull() {
        for c in generators(&h) {
            rep.check(ov.contains(&c), || {
                format!("hull generator {:?} outside the overlap", c)
            });
        }
    }
    let k = members.len().min(6);
    for a in 0..k {
        for b in a + 1..k {
            let (p, q) = (&members[a], &members[b]);
            let mid: Vec<Exponent> = p
                .iter()
                .zip(q)
                .map(|(x, y)| (x.value() + y.value()) / Exponent::from(2))
                .collect();
            let mid = normalize(&mid);
            rep.check(ov.contains(&mid), || {
                format!("midpoint {:?} leaves the overlap", mid)
            });
            for lambda in [
                Exponent::from(-2),
                Exponent::from(0),
                Exponent::new(1, 2),
                Exponent::from(3),
            ] {
                for max in [true, false] {
                    let t = tropical(p, q, lambda, max);
                    rep.check(ov.contains(&t), || {
                        format!("tropical combination {:?} leaves the overlap", t)
                    });
                }
            }
        }
    }
    Ok(ov)
}

fn check_a2(rng: &mut SampleRng, n: usize, index: usize, rep: &mut CheckReport) -> Result<()> {
    let (f1, f2) = overlap_pair(rng, n, index)?;
    let ov = check_overlap(rng, &f1, &f2, rep)?;
    if index % 4 == 0 {
        rep.check(ov.contains(&model_point(rng, n, 6)), || {
            "recharting lost points".into()
        });
    }
    Ok(())
}

fn check_a3(rng: &mut SampleRng, n: usize, rep: &mut CheckReport) -> Result<()> {
    let x = BuildingPoint::new(sampling::sl_element(rng, n, 3))?;
    let y = BuildingPoint::new(sampling::sl_element(rng, n, 3))?;
    let ch = apartment_through(&x, &y)?;
    let (cx, cy) = (ch.locate(&x)?, ch.locate(&y)?);
    rep.check(cx.is_some() && cy.is_some(), || {
        format!("apartment misses {} or {}", x, y)
    });
    if let (Some(cx), Some(cy)) = (cx, cy) {
        let d = vector_distance(&x, &y)?;
        rep.check(model_vector(&cx, &cy) == d.vector, || {
            format!(
                "model vector {:?} but distance {:?}",
                model_vector(&cx, &cy),
                d.vector
            )
        });
        rep.check(ch.point(&cy)?.same_point(&y)?, || {
            "located coordinates do not map back".into()
        });
    }
    Ok(())
}

fn difference(a: &[ValueGroupElement], b: &[ValueGroupElement]) -> ModelPoint {
    a.iter().zip(b).map(|(x, y)| *x - *y).collect()
}

fn check_common(s1: &Sector, s2: &Sector, rep: &mut CheckReport) -> Result<()> {
    match common_apartment(s1, s2)? {
        None => rep.check(false, || {
            "no common apartment within the search depth".into()
        }),
        Some(c) => {
            rep.check(is_dominant(&difference(&c.sub1.tip, &s1.tip)), || {
                "first subsector is not a subsector".into()
            });
            rep.check(is_dominant(&difference(&c.sub2.tip, &s2.tip)), || {
                "second subsector is not a subsector".into()
            });
            rep.check(sector_on_chart(&c.sub1, &c.chart)?, || {
                "first subsector off the apartment".into()
            });
            rep.check(sector_on_chart(&c.sub2, &c.chart)?, || {
                "second subsector off the apartment".into()
            });
        }
    }
    Ok(())
}

fn check_a4(rng: &mut SampleRng, n: usize, index: usize, rep: &mut CheckReport) -> Result<()> {
    if index == 0 {
        // opposite chambers at the base point
        let mut anti = PMatrix::zeros(n, n);
        for i in 0..n {
            anti[(i, n - 1 - i)] = Puiseux::one();
        }
        if n % 4 == 2 || n % 4 == 3 {
            anti[(0, n - 1)] = -Puiseux::one();
        }
        let s2 = Sector::new(
            ApartmentChart::new(anti)?,
            vec![ValueGroupElement::zero(); n],
        )?;
        check_common(&Sector::standard(n), &s2, rep)?;
    }
    let s1 = Sector::new(random_chart(rng, n)?, model_point(rng, n, 2))?;
    let s2 = Sector::new(random_chart(rng, n)?, model_point(rng, n, 2))?;
    check_common(&s1, &s2, rep)
}

fn column(a: Puiseux, b: Puiseux) -> [Puiseux; 2] {
    [a, b]
}

fn end_chart(g: &PMatrix, a: &[Puiseux; 2], b: &[Puiseux; 2]) -> Result<ApartmentChart> {
    let f = PMatrix::from_rows(vec![
        vec![a[0].clone(), b[0].clone()],
        vec![a[1].clone(), b[1].clone()],
    ])?;
    let f = g.mul(&f)?;
    let k = f.det()?.ord_nonzero()?;
    ApartmentChart::new(f.scale_columns_by_powers(&[-k, Exponent::from(0)]))
}

/// Bounds `(lo, hi)` on `c_1 - c_0` for an `n = 2` overlap.
fn interval(ov: &Overlap) -> Option<(Option<Exponent>, Option<Exponent>)> {
    let h = ov.hull()?;
    Some((h[1][0].map(|b| -b), h[0][1]))
}

/// Three apartments of the tree, pairwise sharing an end, always meet.
fn check_a5(rng: &mut SampleRng, index: usize, rep: &mut CheckReport) -> Result<()> {
    let qs = [
        Exponent::from(1),
        Exponent::from(2),
        Exponent::new(1, 2),
        Exponent::from(3),
    ];
    let q = qs[index % 4];
    let tq = Puiseux::t_pow(q);
    let e1 = column(Puiseux::one(), tq.clone());
    let e2 = column(Puiseux::one(), Puiseux::one() + tq.clone());
    let e3 = if (index / 4) % 2 == 0 {
        column(tq.clone(), Puiseux::one())
    } else {
        column(Puiseux::one(), Puiseux::one() + tq.clone() + tq.pow(2))
    };
    let g = if index % 2 == 0 {
        PMatrix::identity(2)
    } else {
        sampling::sl_element(rng, 2, 3)
    };
    let f12 = end_chart(&g, &e1, &e2)?;
    let f13 = end_chart(&g, &e1, &e3)?;
    let f23 = end_chart(&g, &e2, &e3)?;

    for (a, b) in [(&f12, &f13), (&f12, &f23), (&f13, &f23)] {
        let ov = check_overlap(rng, a, b, rep)?;
        match interval(&ov) {
            None => rep.check(false, || "apartments sharing an end do not meet".into()),
            Some((lo, hi)) => rep.check(lo.is_some() != hi.is_some(), || {
                format!("overlap is not a half-line: {:?} to {:?}", lo, hi)
            }),
        }
    }
    let (Some((lo1, hi1)), Some((lo2, hi2))) = (
        interval(&overlap(&f12, &f13)?),
        interval(&overlap(&f12, &f23)?),
    ) else {
        return Ok(());
    };
    let lo = [lo1, lo2].into_iter().flatten().max();
    let hi = [hi1, hi2].into_iter().flatten().min();
    let nonempty = match (lo, hi) {
        (Some(l), Some(h)) => l <= h,
        _ => true,
    };
    rep.check(nonempty, || {
        format!("triple intersection empty: {:?} to {:?}", lo, hi)
    });
    if nonempty {
        let d = lo.or(hi).unwrap_or_default();
        let c = vec![
            ValueGroupElement(-d / Exponent::from(2)),
            ValueGroupElement(d / Exponent::from(2)),
        ];
        let p = f12.point(&c)?;
        rep.check(f13.contains(&p)? && f23.contains(&p)?, || {
            format!("{:?} is not on all three apartments", c)
        });
    }
    Ok(())
}

fn check_a6(rng: &mut SampleRng, n: usize, rep: &mut CheckReport) -> Result<()> {
    let f = random_chart(rng, n)?;
    let cx = model_point(rng, n, 2);
    let x = f.point(&cx)?;
    let y = x.act(&sampling::sl_element(rng, n, 2))?;
    let z = y.act(&sampling::sl_element(rng, n, 1))?;
    let (ry, rz) = (retract(&f, &x, &y)?, retract(&f, &x, &z)?);

    let dyz = scalar_distance(&y, &z)?;
    rep.check(model_distance(&ry, &rz) <= dyz, || {
        format!("retraction expands {} to {}", dyz, model_distance(&ry, &rz))
    });
    let dxy = scalar_distance(&x, &y)?;
    rep.check(model_distance(&cx, &ry) == dxy, || {
        format!(
            "distance from the center changed from {} to {}",
            dxy,
            model_distance(&cx, &ry)
        )
    });
    rep.check(ry != cx || y.same_point(&x)?, || {
        "a point other than x retracts onto x".into()
    });

    let same = BuildingPoint::new(x.rep().mul(&sampling::integral_unimodular(rng, n, 3))?)?;
    rep.check(retract(&f, &x, &same)? == cx, || {
        "another representative of x moved".into()
    });
    let c = model_point(rng, n, 3);
    rep.check(retract(&f, &x, &f.point(&c)?)? == c, || {
        format!("apartment point {:?} moved", c)
    });
    Ok(())
}

/// Contraction, distance from the center, the fibre over the center and
/// fixed points of the apartment, on random instances.
pub fn retraction_suite(n: usize, samples: usize, seed: u64) -> CheckReport {
    let mut rep = CheckReport::new("retraction");
    for i in 0..samples {
        let mut rng = sampling::rng_for(seed, i as u64);
        rep.run(&format!("instance {}", i), |r| check_a6(&mut rng, n, r));
    }
    rep
}

fn instance(n: usize, seed: u64, index: usize) -> Vec<CheckReport> {
    AXIOMS
        .iter()
        .enumerate()
        .map(|(a, name)| {
            let mut rng = sampling::rng_for(seed, ((index as u64) << 3) | a as u64);
            let mut rep = CheckReport::new(*name);
            rep.run(name, |r| match a {
                0 => check_a1(&mut rng, n, r),
                1 => check_a2(&mut rng, n, index, r),
                2 => check_a3(&mut rng, n, r),
                3 => check_a4(&mut rng, n, index, r),
                4 => check_a5(&mut rng, index, r),
                _ => check_a6(&mut rng, n, r),
            });
            rep
        })
        .collect()
}

/// Runs every axiom on `samples` random instances in parallel. A5 always
/// works in the tree `n = 2`.
pub fn axiom_suite(n: usize, samples: usize, seed: u64) -> AxiomReport {
    let per_index: Vec<Vec<CheckReport>> = (0..samples)
        .into_par_iter()
        .map(|i| instance(n, seed, i))
        .collect();
    let mut summary: Vec<CheckReport> = AXIOMS.iter().map(|a| CheckReport::new(*a)).collect();
    let mut instances = Vec::with_capacity(samples * AXIOMS.len());
    for (index, reports) in per_index.into_iter().enumerate() {
        for (a, rep) in reports.into_iter().enumerate() {
            instances.push(InstanceReport {
                index,
                axiom: AXIOMS[a].to_string(),
                passed: rep.passed(),
                witness: rep.failures.clone(),
            });
            summary[a].absorb(rep);
        }
    }
    AxiomReport {
        n,
        samples,
        seed,
        summary,
        instances,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for n in [2, 3] {
            let r = axiom_suite(n, 6, 11);
            assert!(r.passed(), "{}\n{:?}", r, r.summary);
        }
    }

    #[test]
    fn suite_is_deterministic() {
        let a = serde_json::to_string(&axiom_suite(2, 4, 5)).unwrap();
        let b = serde_json::to_string(&axiom_suite(2, 4, 5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn retraction_instances() {
        let r = retraction_suite(3, 10, 2);
        assert!(r.passed(), "{}", r);
    }
}
