//! Two sectors always share an apartment after shrinking to subsectors.
//!
//! With `M = adj(f₁)·f₂`, fraction-free elimination by upper triangular row
//! operations `R` brings `M` to a monomial pattern: `R·M·U = P·D` with `U`
//! upper triangular. Then `b = f₁·R⁻¹` has `f₂ = b·P·D·U⁻¹`, so `b` is an
//! apartment meeting both chambers at infinity. Deep enough subsectors of
//! each sector lie on it.

use serde::Serialize;

use super::chart::{add_points, regular_direction, ApartmentChart, ModelPoint, Sector};
use crate::error::{Error, Result};
use crate::exact_fields::{Exponent, PMatrix};
use crate::log_value::ValueGroupElement;

#[derive(Clone, Debug, Serialize)]
pub struct CommonApartment {
    pub chart: ApartmentChart,
    pub sub1: Sector,
    pub sub2: Sector,
}

fn scaled(v: &[ValueGroupElement], s: i64) -> ModelPoint {
    v.iter()
        .map(|x| ValueGroupElement(x.value() * Exponent::from(s)))
        .collect()
}

/// `ω_k` scaled to integers: `n - k` on the first `k` slots, `-k` after.
fn fundamental(n: usize, k: usize) -> ModelPoint {
    (0..n)
        .map(|i| ValueGroupElement::from_integer(if i < k { (n - k) as i64 } else { -(k as i64) }))
        .collect()
}

/// The probe directions used to test that a sector lies on a chart.
pub fn probe_directions(n: usize) -> Vec<ModelPoint> {
    let mut out = vec![vec![ValueGroupElement::zero(); n], regular_direction(n)];
    for k in 1..n {
        out.push(fundamental(n, k));
        out.push(scaled(&fundamental(n, k), 5));
    }
    out
}

/// Whether the probe points of `s` all lie on `chart`.
pub fn sector_on_chart(s: &Sector, chart: &ApartmentChart) -> Result<bool> {
    for v in probe_directions(s.n()) {
        if !chart.contains(&s.point(&v)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The row operations bringing `m` to monomial pattern, as an upper
/// triangular matrix.
fn eliminate(m: &PMatrix) -> Result<PMatrix> {
    let n = m.rows();
    let mut a = m.clone();
    let mut r = PMatrix::identity(n);
    let mut used = vec![false; n];
    for j in 0..n {
        let mut piv = None;
        for i in (0..n).rev() {
            if !used[i] && !a[(i, j)].is_zero_checked()? {
                piv = Some(i);
                break;
            }
        }
        let piv = piv.ok_or(Error::SingularMatrix)?;
        let p = a[(piv, j)].clone();
        for i in 0..piv {
            if a[(i, j)].is_exact_zero() {
                continue;
            }
            let c = a[(i, j)].clone();
            for k in 0..n {
                a[(i, k)] = &(&p * &a[(i, k)]) - &(&c * &a[(piv, k)]);
                r[(i, k)] = &(&p * &r[(i, k)]) - &(&c * &r[(piv, k)]);
            }
        }
        for k in j + 1..n {
            if a[(piv, k)].is_exact_zero() {
                continue;
            }
            let c = a[(piv, k)].clone();
            for i in 0..n {
                a[(i, k)] = &(&p * &a[(i, k)]) - &(&c * &a[(i, j)]);
            }
        }
        used[piv] = true;
    }
    Ok(r)
}

/// The subsector of `s` with tip `tip + step·ρ` for the first step in
/// `0, 1, 2, 4, …, 128` whose probes land on `chart`.
fn deep_subsector(s: &Sector, chart: &ApartmentChart) -> Result<Option<Sector>> {
    let rho = regular_direction(s.n());
    for step in std::iter::once(0).chain((0..8).map(|k| 1i64 << k)) {
        let sub = Sector::new(s.chart.clone(), add_points(&s.tip, &scaled(&rho, step)))?;
        if sector_on_chart(&sub, chart)? {
            return Ok(Some(sub));
        }
    }
    Ok(None)
}

/// An apartment containing subsectors of both sectors, or `None` if no
/// subsector within the search depth fits.
pub fn common_apartment(s1: &Sector, s2: &Sector) -> Result<Option<CommonApartment>> {
    if s1.n() != s2.n() {
        return Err(Error::DimensionMismatch {
            expected: s1.n(),
            found: s2.n(),
        });
    }
    let f1 = s1.chart.frame();
    let r = eliminate(&f1.adjugate()?.mul(s2.chart.frame())?)?;
    let b = f1.mul(&r.adjugate()?)?;
    let k = b.det()?.ord()?.ok_or(Error::SingularMatrix)?;
    let mut shift = vec![Exponent::from(0); s1.n()];
    shift[0] = -k;
    let chart = ApartmentChart::new(b.scale_columns_by_powers(&shift))?;
    let (Some(sub1), Some(sub2)) = (deep_subsector(s1, &chart)?, deep_subsector(s2, &chart)?)
    else {
        return Ok(None);
    };
    Ok(Some(CommonApartment { chart, sub1, sub2 }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(rows: &[&[&str]]) -> PMatrix {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        PMatrix::parse_rows(&rows).unwrap()
    }

    #[test]
    fn opposite_sectors_at_the_base_point() {
        let s1 = Sector::standard(2);
        let opp = ApartmentChart::new(pm(&[&["0", "-1"], &["1", "0"]])).unwrap();
        let s2 = Sector::new(opp, vec![ValueGroupElement::zero(); 2]).unwrap();
        let c = common_apartment(&s1, &s2).unwrap().unwrap();
        assert_eq!(c.chart, ApartmentChart::standard(2));
        assert_eq!(c.sub1, s1);
        assert_eq!(c.sub2, s2);
    }

    #[test]
    fn sectors_in_different_apartments() {
        let s1 = Sector::standard(3);
        let f = pm(&[
            &["1", "0", "0"],
            &["t^(-1)", "1", "0"],
            &["2", "t^(-2)", "1"],
        ]);
        let s2 = Sector::new(ApartmentChart::new(f).unwrap(), regular_direction(3)).unwrap();
        let c = common_apartment(&s1, &s2).unwrap().unwrap();
        assert!(sector_on_chart(&c.sub1, &c.chart).unwrap());
        assert!(sector_on_chart(&c.sub2, &c.chart).unwrap());
    }
}
