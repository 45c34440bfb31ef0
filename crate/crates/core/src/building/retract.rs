use super::chart::{add_points, ApartmentChart, ModelPoint};
use super::{smith, BuildingPoint};
use crate::error::{Error, Result};
use crate::exact_fields::{Exponent, QMatrix, Rational, Scalar};
use crate::log_value::ValueGroupElement;
use crate::valuation::residue;

fn span_rank(cols: &[Vec<Rational>], n: usize) -> Result<usize> {
    if cols.is_empty() {
        return Ok(0);
    }
    QMatrix::from_fn(n, cols.len(), |i, j| cols[j][i].clone()).rank()
}

fn unit_vector(n: usize, k: usize) -> Vec<Rational> {
    (0..n)
        .map(|i| {
            if i == k {
                <Rational as Scalar>::one()
            } else {
                <Rational as Scalar>::zero()
            }
        })
        .collect()
}

/// `ρ(target)` for the retraction onto `F` centered at the germ of the
/// dominant Weyl chamber of `F` at `x`.
///
/// In the basis `b` of `x` taken from `F`, `target = b·u₁·diag(t^e)·u₂`
/// with `u_i ∈ GL_n(O)`. Grouping the residues of the columns of `u₁` by
/// `e` gives a partial flag; its position relative to the standard flag
/// (the germ of `F`) says which coordinate of the image receives which
/// order.
pub fn retract(
    f: &ApartmentChart,
    x: &BuildingPoint,
    target: &BuildingPoint,
) -> Result<ModelPoint> {
    let n = f.n();
    let cx = f
        .locate(x)?
        .ok_or_else(|| Error::InvalidPoint("x is not on the apartment".into()))?;
    let b = f.basis_at(&cx);
    let s = smith(&b.adjugate()?.mul(target.rep())?)?;
    let u1 = s.left_factor()?;
    let res: Vec<Vec<Rational>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| residue(&u1[(i, j)]))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut levels: Vec<Exponent> = s.orders.clone();
    levels.dedup();
    let group = |a: Exponent| -> Vec<Vec<Rational>> {
        (0..n)
            .filter(|&j| s.orders[j] <= a)
            .map(|j| res[j].clone())
            .collect()
    };
    let meet_dim = |g: &[Vec<Rational>], k: usize| -> Result<usize> {
        let mut all = g.to_vec();
        all.extend((0..k).map(|i| unit_vector(n, i)));
        Ok(span_rank(g, n)? + k - span_rank(&all, n)?)
    };

    let mut image = Vec::with_capacity(n);
    for k in 1..=n {
        let mut assigned = None;
        for &a in &levels {
            let g = group(a);
            if meet_dim(&g, k)? > meet_dim(&g, k - 1)? {
                assigned = Some(a);
                break;
            }
        }
        let a = assigned.ok_or_else(|| Error::InvalidPoint("degenerate residue flag".into()))?;
        image.push(ValueGroupElement(-a * Exponent::from(2)));
    }
    Ok(add_points(&cx, &image))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_fields::PMatrix;

    fn pm(rows: &[&[&str]]) -> PMatrix {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        PMatrix::parse_rows(&rows).unwrap()
    }

    fn v(xs: &[i64]) -> ModelPoint {
        xs.iter()
            .map(|&x| ValueGroupElement::from_integer(x))
            .collect()
    }

    #[test]
    fn unipotent_target() {
        let f = ApartmentChart::standard(2);
        let o = BuildingPoint::base(2);
        let y = BuildingPoint::new(pm(&[&["1", "t^(-1)"], &["0", "1"]])).unwrap();
        assert_eq!(retract(&f, &o, &y).unwrap(), v(&[2, -2]));
        let z = BuildingPoint::new(pm(&[&["1", "0"], &["t^(-1)", "1"]])).unwrap();
        // the lower unipotent target opens away from the dominant germ
        assert_eq!(retract(&f, &o, &z).unwrap(), v(&[-2, 2]));
    }

    #[test]
    fn points_on_the_apartment_are_fixed() {
        let f = ApartmentChart::new(pm(&[&["1", "t"], &["0", "1"]])).unwrap();
        let x = f.point(&v(&[2, -2])).unwrap();
        for c in [v(&[0, 0]), v(&[-6, 6]), v(&[3, -3]), v(&[2, -2])] {
            assert_eq!(retract(&f, &x, &f.point(&c).unwrap()).unwrap(), c);
        }
        let f3 = ApartmentChart::standard(3);
        let x3 = f3.point(&v(&[1, 1, -2])).unwrap();
        let c = v(&[-3, 5, -2]);
        assert_eq!(retract(&f3, &x3, &f3.point(&c).unwrap()).unwrap(), c);
    }

    #[test]
    fn off_apartment_center_is_rejected() {
        let f = ApartmentChart::standard(2);
        let y = BuildingPoint::new(pm(&[&["1", "t^(-1)"], &["0", "1"]])).unwrap();
        assert!(retract(&f, &y, &y).is_err());
    }
}
