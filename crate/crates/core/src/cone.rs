//! Asymptotic cones of the symmetric space, through the surrogate field.
//!
//! A classical family `s ↦ X(s)` is written with `t = 1/s`, so it becomes a
//! single point of `P_n` over the Puiseux field. Its cone point is the
//! projection to the building, and the cone distance of two families is
//! computed twice: from eigenvalue valuations (Newton polygons) and from
//! the elementary divisors of the projected points (Smith form).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::building::{project, scalar_distance, BuildingPoint};
use crate::error::{Error, Result};
use crate::exact_fields::{Exponent, PMatrix, Puiseux};
use crate::log_value::ValueGroupElement;
use crate::report::CheckReport;
use crate::sampling;
use crate::symmetric_space::{valuation_distance, PDPoint};

/// A family given by Puiseux expressions in `t = 1/s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trajectory {
    pub n: usize,
    pub entries: Vec<Vec<String>>,
}

impl Trajectory {
    pub fn from_matrix(m: &PMatrix) -> Self {
        Trajectory {
            n: m.rows(),
            entries: m
                .to_rows()
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect())
                .collect(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn parse(&self) -> Result<PDPoint> {
        if self.entries.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: self.entries.len(),
            });
        }
        let m = PMatrix::parse_rows(&self.entries)?;
        if m.cols() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: m.cols(),
            });
        }
        PDPoint::new(m)
    }
}

pub fn cone_point(t: &Trajectory) -> Result<BuildingPoint> {
    project(&t.parse()?)
}

pub fn cone_distance(t1: &Trajectory, t2: &Trajectory) -> Result<ValueGroupElement> {
    valuation_distance(&t1.parse()?, &t2.parse()?)
}

/// Both distances and whether they agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualPath {
    pub newton: ValueGroupElement,
    pub smith: ValueGroupElement,
    pub equal: bool,
}

pub fn dual_path(t1: &Trajectory, t2: &Trajectory) -> Result<DualPath> {
    let (p, q) = (t1.parse()?, t2.parse()?);
    let newton = valuation_distance(&p, &q)?;
    let smith = scalar_distance(&project(&p)?, &project(&q)?)?;
    Ok(DualPath {
        newton,
        smith,
        equal: newton == smith,
    })
}

fn trajectory(rows: &[&[&str]]) -> Trajectory {
    Trajectory {
        n: rows.len(),
        entries: rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect(),
    }
}

/// The worked pairs: the identity against a diagonal family, a family
/// against itself, and a diagonal family against the unipotent product
/// `g gᵀ` with `g = [[1, 1/t], [0, 1]]·[[1, 0], [1/t, 1]]`.
pub fn worked_pairs() -> Result<Vec<(Trajectory, Trajectory)>> {
    let id = trajectory(&[&["1", "0"], &["0", "1"]]);
    let diag = trajectory(&[&["t^(-1)", "0"], &["0", "t"]]);
    let g = PMatrix::parse_rows(&[vec!["1", "t^(-1)"], vec!["0", "1"]])?.mul(
        &PMatrix::parse_rows(&[vec!["1", "0"], vec!["t^(-1)", "1"]])?,
    )?;
    let prod = Trajectory::from_matrix(&sampling::congruence(&g, &PMatrix::identity(2)));
    Ok(vec![
        (id, diag.clone()),
        (diag.clone(), diag.clone()),
        (diag, prod),
    ])
}

/// A product of elementary matrices `I + x·E_ij` with
/// `ord x ≥ (ord d_i - ord d_j)/2`. These lie in `D^(1/2)·SL_n(O)·D^(-1/2)`,
/// so `k D kᵀ` stays at distance zero from `D`, and everything is exact.
fn stabilizer_of(rng: &mut sampling::SampleRng, d: &PMatrix) -> Result<PMatrix> {
    let n = d.rows();
    let mut k = PMatrix::identity(n);
    for _ in 0..3 {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let floor = (d[(i, i)].ord_nonzero()? - d[(j, j)].ord_nonzero()?) / Exponent::from(2);
        let e = floor + Exponent::new(rng.gen_range(0..=2), 2);
        let mut step = PMatrix::identity(n);
        step[(i, j)] = Puiseux::monomial(sampling::small_rational(rng), e);
        k = k.mul(&step)?;
    }
    Ok(k)
}

fn check_pair(rep: &mut CheckReport, t1: &Trajectory, t2: &Trajectory) -> Result<()> {
    let d = dual_path(t1, t2)?;
    rep.check(d.equal, || {
        format!("Newton path {} but Smith path {}", d.newton, d.smith)
    });
    Ok(())
}

/// Dual-path identity on the worked pairs and on sampled pairs, plus
/// invariance under a common bounded congruence and the collapse law.
pub fn cone_suite(n: usize, samples: usize, seed: u64) -> CheckReport {
    let mut rep = CheckReport::new(format!("cone correspondence n={}", n));
    if n == 2 {
        match worked_pairs() {
            Ok(pairs) => {
                for (a, b) in &pairs {
                    rep.run("worked pair", |r| check_pair(r, a, b));
                }
            }
            Err(e) => rep.error("worked pairs", &e),
        }
    }
    for i in 0..samples {
        let mut rng = sampling::rng_for(seed, i as u64);
        rep.run(&format!("pair {}", i), |r| {
            let g = sampling::sl_element(&mut rng, n, 2);
            let d = sampling::positive_diagonal(&mut rng, n, 2);
            let x = sampling::congruence(&g, &d);
            let y = sampling::pd_matrix(&mut rng, n);
            let (t1, t2) = (Trajectory::from_matrix(&x), Trajectory::from_matrix(&y));
            check_pair(r, &t1, &t2)?;

            let k = sampling::integral_unimodular(&mut rng, n, 3);
            let (m1, m2) = (
                Trajectory::from_matrix(&sampling::congruence(&k, &x)),
                Trajectory::from_matrix(&sampling::congruence(&k, &y)),
            );
            let (before, after) = (cone_distance(&t1, &t2)?, cone_distance(&m1, &m2)?);
            r.check(before == after, || {
                format!("bounded translation changed {} to {}", before, after)
            });

            let k = stabilizer_of(&mut rng, &d)?;
            let x2 = Trajectory::from_matrix(&sampling::congruence(&g.mul(&k)?, &d));
            let zero = cone_distance(&t1, &x2)?;
            r.check(zero == ValueGroupElement::zero(), || {
                format!("bounded perturbation at distance {}", zero)
            });
            r.check(cone_point(&t1)?.same_point(&cone_point(&x2)?)?, || {
                "bounded perturbation moved the cone point".into()
            });
            Ok(())
        });
    }
    rep
}
