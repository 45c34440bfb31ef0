//! Chambers of the local building `Δ_x` (full flags over the residue field)
//! and of the building at infinity `Δ_∞` (full flags over the field).

use rand::Rng;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::chart::{regular_direction, ApartmentChart, Sector};
use super::BuildingPoint;
use crate::error::{Error, Result};
use crate::exact_fields::{default_depth, Exponent, PMatrix, Puiseux, QMatrix, Rational};
use crate::log_value::ValueGroupElement;
use crate::report::CheckReport;
use crate::sampling;
use crate::valuation::residue;

/// A full flag of subspaces of ℚⁿ, each stored as a reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueFlag {
    pub subspaces: Vec<Vec<Vec<Rational>>>,
}

impl ResidueFlag {
    /// The flag of column prefixes of an invertible matrix.
    pub fn from_columns(m: &QMatrix) -> Result<Self> {
        let n = m.rows();
        if m.rank()? != n {
            return Err(Error::SingularMatrix);
        }
        let subspaces = (1..n)
            .map(|k| {
                let rows: Vec<usize> = (0..k).collect();
                let cols: Vec<usize> = (0..n).collect();
                m.transpose().submatrix(&rows, &cols).row_space_basis()
            })
            .collect();
        Ok(ResidueFlag { subspaces })
    }

    pub fn standard(n: usize) -> Self {
        Self::from_columns(&QMatrix::identity(n)).expect("identity is invertible")
    }
}

impl Serialize for ResidueFlag {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.subspaces.len()))?;
        for space in &self.subspaces {
            let rows: Vec<Vec<String>> = space
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect())
                .collect();
            seq.serialize_element(&rows)?;
        }
        seq.end()
    }
}

/// A full flag of subspaces of Fⁿ given by the column prefixes of `basis`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldFlag {
    pub basis: PMatrix,
}

impl FieldFlag {
    pub fn n(&self) -> usize {
        self.basis.rows()
    }

    /// Equality of flags: every pair of prefixes spans a space of the
    /// prefix dimension.
    pub fn same_as(&self, other: &Self) -> Result<bool> {
        if self.n() != other.n() {
            return Ok(false);
        }
        for k in 1..self.n() {
            let joined = self
                .basis
                .leading_columns(k)
                .hstack(&other.basis.leading_columns(k))?;
            if joined.rank()? != k {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Serialize for FieldFlag {
    /// Serialized as the list of basis columns.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.basis.transpose().serialize(serializer)
    }
}

fn residue_matrix(m: &PMatrix) -> Result<QMatrix> {
    m.try_map(residue)
}

/// The germ of `s` at its tip `x`, as a residue flag in the coordinates of
/// `x`'s representative.
pub fn germ_at(x: &BuildingPoint, s: &Sector) -> Result<ResidueFlag> {
    if !x.same_point(&s.base()?)? {
        return Err(Error::InvalidPoint("the sector is not based at x".into()));
    }
    let b = s.chart.basis_at(&s.tip);
    let m = x.rep().adjugate()?.mul(&b)?;
    ResidueFlag::from_columns(&residue_matrix(&m)?)
}

pub fn chamber_at_infinity(s: &Sector) -> FieldFlag {
    FieldFlag {
        basis: s.chart.frame().clone(),
    }
}

/// An `O`-basis (as columns) of `span(cols) ∩ Oⁿ`, by pivoting on entries
/// of least order and clearing pivot rows.
fn saturate(cols: &[Vec<Puiseux>]) -> Result<Vec<Vec<Puiseux>>> {
    let mut cols = cols.to_vec();
    let k = cols.len();
    let n = cols.first().map_or(0, Vec::len);
    for j in 0..k {
        let mut best: Option<(usize, usize, Exponent)> = None;
        for (c, col) in cols.iter().enumerate().skip(j) {
            for (r, x) in col.iter().enumerate() {
                if let Some(o) = x.ord()? {
                    if best.map_or(true, |(_, _, b)| o < b) {
                        best = Some((r, c, o));
                    }
                }
            }
        }
        let (r, c, _) = best.ok_or(Error::SingularMatrix)?;
        cols.swap(j, c);
        let p = cols[j][r].clone();
        cols[j] = cols[j]
            .iter()
            .map(|x| x.divide(&p, default_depth()))
            .collect::<Result<_>>()?;
        for l in 0..k {
            if l == j || cols[l][r].is_exact_zero() {
                continue;
            }
            let f = cols[l][r].clone();
            for i in 0..n {
                let v = &cols[l][i] - &(&f * &cols[j][i]);
                cols[l][i] = v;
            }
        }
    }
    Ok(cols)
}

/// The residue at `x` of a flag at infinity, computed by saturating each
/// subspace against the lattice of `x`.
pub fn residue_of_flag(x: &BuildingPoint, flag: &FieldFlag) -> Result<ResidueFlag> {
    let n = flag.n();
    let m = x.rep().adjugate()?.mul(&flag.basis)?;
    let mut subspaces = Vec::with_capacity(n - 1);
    for k in 1..n {
        let cols: Vec<Vec<Puiseux>> = (0..k).map(|j| m.column(j)).collect();
        let sat = saturate(&cols)?;
        let rows = sat
            .iter()
            .map(|col| col.iter().map(residue).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        subspaces.push(QMatrix::from_rows(rows)?.row_space_basis());
    }
    Ok(ResidueFlag { subspaces })
}

fn small_multiple(v: &[ValueGroupElement], eps: Exponent) -> Vec<ValueGroupElement> {
    v.iter()
        .map(|x| ValueGroupElement(x.value() * eps))
        .collect()
}

fn random_upper_unipotent<R: Rng>(rng: &mut R, n: usize) -> PMatrix {
    let mut u = PMatrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            u[(i, j)] =
                Puiseux::monomial(sampling::small_rational(rng), sampling::exponent(rng, 2));
        }
    }
    u
}

fn check_sector(rep: &mut CheckReport, s: &Sector, seed: u64) -> Result<()> {
    let n = s.n();
    let mut rng = sampling::rng_for(seed, 0);
    let x = s.base()?;
    let germ = germ_at(&x, s)?;

    // a residually trivial perturbation at the tip keeps the germ
    let g = sampling::residually_trivial(&mut rng, n, 3);
    let b = s.chart.basis_at(&s.tip);
    let lifted: Vec<Exponent> = s
        .tip
        .iter()
        .map(|c| c.value() / Exponent::from(2))
        .collect();
    let frame = b.mul(&g)?.scale_columns_by_powers(&lifted);
    let perturbed = Sector::new(ApartmentChart::new(frame)?, s.tip.clone())?;
    rep.check(x.same_point(&perturbed.base()?)?, || {
        "perturbed sector moved its tip".into()
    });
    let germ2 = germ_at(&x, &perturbed)?;
    rep.check(germ == germ2, || {
        format!("germs differ: {:?} vs {:?}", germ, germ2)
    });
    // and the two sectors agree near the tip
    let eps = Exponent::new(1, 4 * n as i64);
    let rho = regular_direction(n);
    let near = small_multiple(&rho, eps);
    rep.check(
        s.point(&near)?.same_point(&perturbed.point(&near)?)?,
        || format!("sectors with equal germs disagree at {:?}", near),
    );

    // subsector equivalence leaves the chamber at infinity alone
    let at_inf = chamber_at_infinity(s);
    let sub = s
        .subsector(&small_multiple(&rho, Exponent::from(3)))?
        .recentered()?;
    rep.check(at_inf.same_as(&chamber_at_infinity(&sub))?, || {
        "subsector has a different chamber at infinity".into()
    });
    let u = random_upper_unipotent(&mut rng, n);
    let parallel = Sector::new(
        ApartmentChart::new(s.chart.frame().mul(&u)?)?,
        s.tip.clone(),
    )?;
    rep.check(at_inf.same_as(&chamber_at_infinity(&parallel))?, || {
        "unipotent change of frame moved the chamber at infinity".into()
    });
    let mut shared = false;
    for k in 0..10 {
        let depth = Exponent::from(1i64 << k);
        let p = s.point(&small_multiple(&rho, depth))?;
        if let Some(c) = parallel.chart.locate(&p)? {
            let rel: Vec<ValueGroupElement> =
                c.iter().zip(&parallel.tip).map(|(a, b)| *a - *b).collect();
            if super::chart::is_dominant(&rel) {
                shared = true;
                break;
            }
        }
    }
    rep.check(shared, || {
        format!(
            "sectors with equal flags at infinity share no deep point (u = {:?})",
            u.to_rows()
        )
    });

    // the germ at the tip is the residue of the flag at infinity
    let res = residue_of_flag(&x, &at_inf)?;
    rep.check(res == germ, || {
        format!(
            "germ {:?} is not the residue {:?} of the flag at infinity",
            germ, res
        )
    });
    Ok(())
}

/// Checks the map from chambers at infinity to germs on one sector.
pub fn epimorphism_check(s: &Sector, seed: u64) -> CheckReport {
    let mut report = CheckReport::new("germs and chambers at infinity");
    report.run("sector", |rep| check_sector(rep, s, seed));
    report
}

/// [`epimorphism_check`] on `samples` random sectors.
pub fn epimorphism_suite(n: usize, samples: usize, seed: u64) -> CheckReport {
    let mut report = CheckReport::new(format!("germs and chambers at infinity, n = {}", n));
    for i in 0..samples {
        let mut rng = sampling::rng_for(seed, i as u64);
        let steps = rng.gen_range(1..=3);
        let frame = sampling::sl_element(&mut rng, n, steps);
        let tip: Vec<ValueGroupElement> = sampling::balanced_exponents(&mut rng, n, 2)
            .into_iter()
            .map(ValueGroupElement)
            .collect();
        let sub_seed = rng.gen();
        report.run(&format!("sample {}", i), |rep| {
            let s = Sector::new(ApartmentChart::new(frame)?, tip)?;
            rep.absorb(epimorphism_check(&s, sub_seed));
            Ok(())
        });
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(rows: &[&[&str]]) -> PMatrix {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        PMatrix::parse_rows(&rows).unwrap()
    }

    #[test]
    fn standard_sector_has_standard_flags() {
        for n in 2..=3 {
            let s = Sector::standard(n);
            let o = BuildingPoint::base(n);
            assert_eq!(germ_at(&o, &s).unwrap(), ResidueFlag::standard(n));
            let inf = chamber_at_infinity(&s);
            assert!(inf
                .same_as(&FieldFlag {
                    basis: PMatrix::identity(n)
                })
                .unwrap());
            assert_eq!(residue_of_flag(&o, &inf).unwrap(), ResidueFlag::standard(n));
        }
    }

    #[test]
    fn perturbed_and_distinct_germs() {
        let o = BuildingPoint::base(2);
        let g = pm(&[&["1", "t"], &["t^(1/2)", "1 + t^(3/2)"]]);
        let s = Sector::new(
            ApartmentChart::new(g).unwrap(),
            vec![ValueGroupElement::zero(); 2],
        )
        .unwrap();
        assert_eq!(germ_at(&o, &s).unwrap(), ResidueFlag::standard(2));
        let swapped = pm(&[&["0", "-1"], &["1", "0"]]);
        let s2 = Sector::new(
            ApartmentChart::new(swapped).unwrap(),
            vec![ValueGroupElement::zero(); 2],
        )
        .unwrap();
        assert_ne!(
            germ_at(&o, &s2).unwrap(),
            germ_at(&o, &Sector::standard(2)).unwrap()
        );
    }

    #[test]
    fn germ_needs_the_tip() {
        let o = BuildingPoint::base(2);
        let s = Sector::standard(2)
            .subsector(&regular_direction(2))
            .unwrap();
        assert!(germ_at(&o, &s).is_err());
    }

    #[test]
    fn small_suite_passes() {
        for n in 2..=3 {
            let r = epimorphism_suite(n, 10, 9);
            assert!(r.passed(), "{}", r);
        }
    }
}
