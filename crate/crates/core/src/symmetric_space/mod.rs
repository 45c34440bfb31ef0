//! The space `P_n` of symmetric positive definite determinant-one matrices
//! over the Puiseux field, acted on by `SL_n` through `g·X = g X gᵀ`.
//!
//! Two distances are provided. [`lambda_distance`] is Λ-valued and needs
//! the eigenvalues of `P⁻¹Q` as exact series, which only some families
//! have. [`valuation_distance`] is its image in Γ and is read off the Newton
//! polygon of the characteristic polynomial, so it is always available.

mod checks;
mod iwasawa;
mod retraction;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use checks::{kostant_suite, metric_suite};
pub use iwasawa::{iwasawa, iwasawa_a_orders, kostant_check, majorized, Iwasawa};
pub use retraction::{retraction_to_diagonal, triangle_via_retraction, TriangleWitness};

use crate::error::{Error, Result};
use crate::exact_fields::{
    charpoly, charpoly_root_orders, default_depth, finite_roots, Exponent, PMatrix, Puiseux,
};
use crate::log_value::{LogElement, ValueGroupElement};

/// A point of `P_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PDPoint {
    mat: PMatrix,
}

/// `x` equals one through its certified window, and that window is positive.
pub(crate) fn is_certified_one(x: &Puiseux) -> bool {
    if x.is_exact_one() {
        return true;
    }
    let diff = x - &Puiseux::one();
    diff.terms().is_empty()
        && diff
            .certified_order()
            .is_some_and(|w| w > Exponent::from(0))
}

impl PDPoint {
    /// Validates symmetry, unit determinant and the Sylvester criterion.
    pub fn new(mat: PMatrix) -> Result<Self> {
        let n = mat.rows();
        if !mat.is_square() {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: mat.cols(),
            });
        }
        for i in 0..n {
            for j in 0..i {
                if !mat[(i, j)].agrees_with(&mat[(j, i)]) {
                    return Err(Error::InvalidPoint(format!(
                        "entries ({}, {}) and ({}, {}) differ",
                        i, j, j, i
                    )));
                }
            }
        }
        let det = mat.det()?;
        if !is_certified_one(&det) {
            return Err(Error::InvalidPoint(format!(
                "determinant is {}, not 1",
                det
            )));
        }
        for k in 1..=n {
            let idx: Vec<usize> = (0..k).collect();
            let minor = mat.minor_det(&idx, &idx);
            if !minor.is_positive()? {
                return Err(Error::InvalidPoint(format!(
                    "leading minor {} is {}",
                    k, minor
                )));
            }
        }
        Ok(PDPoint { mat })
    }

    pub fn identity(n: usize) -> Self {
        PDPoint {
            mat: PMatrix::identity(n),
        }
    }

    pub fn diagonal(entries: Vec<Puiseux>) -> Result<Self> {
        Self::new(PMatrix::diagonal(entries))
    }

    pub fn n(&self) -> usize {
        self.mat.rows()
    }

    pub fn mat(&self) -> &PMatrix {
        &self.mat
    }

    pub fn into_mat(self) -> PMatrix {
        self.mat
    }

    /// `g X gᵀ`; `g` must have determinant one.
    pub fn act(&self, g: &PMatrix) -> Result<Self> {
        let m = g.mul(&self.mat)?.mul(&g.transpose())?;
        Self::new(m)
    }

    /// `X⁻¹`, which is the adjugate since the determinant is one.
    pub fn inverse(&self) -> Result<PMatrix> {
        self.mat.adjugate()
    }

    /// Leading principal minors `Δ_1, ..., Δ_n`.
    pub fn leading_minors(&self) -> Vec<Puiseux> {
        (1..=self.n())
            .map(|k| {
                let idx: Vec<usize> = (0..k).collect();
                self.mat.minor_det(&idx, &idx)
            })
            .collect()
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| i == j || self.mat[(i, j)].is_exact_zero()))
    }
}

impl fmt::Display for PDPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .mat
            .to_rows()
            .iter()
            .map(|r| {
                format!(
                    "[{}]",
                    r.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl Serialize for PDPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.mat.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PDPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let mat = PMatrix::deserialize(deserializer)?;
        PDPoint::new(mat).map_err(serde::de::Error::custom)
    }
}

/// Logs of the eigenvalues of `P⁻¹Q`, sorted descending. They sum to zero.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeylVector {
    entries: Vec<LogElement>,
}

impl WeylVector {
    pub fn from_unsorted(mut entries: Vec<LogElement>) -> Result<Self> {
        // insertion sort, since comparisons can fail
        for i in 1..entries.len() {
            let mut j = i;
            while j > 0 && entries[j - 1].compare(&entries[j])? == Ordering::Less {
                entries.swap(j - 1, j);
                j -= 1;
            }
        }
        Ok(WeylVector { entries })
    }

    pub fn entries(&self) -> &[LogElement] {
        &self.entries
    }

    /// Image in Γⁿ.
    pub fn valuation_vector(&self) -> Result<Vec<ValueGroupElement>> {
        self.entries.iter().map(LogElement::quotient_map).collect()
    }

    /// `Σ |lg λ_i| = lg Π max(λ_i, λ_i⁻¹)`.
    pub fn norm(&self, depth: Exponent) -> Result<LogElement> {
        let mut big = Puiseux::one();
        let mut small = Puiseux::one();
        for e in &self.entries {
            if e.signum()? == Ordering::Less {
                small = &small * e.carrier();
            } else {
                big = &big * e.carrier();
            }
        }
        LogElement::lg(big.divide(&small, depth)?)
    }
}

fn relative(p: &PDPoint, q: &PDPoint) -> Result<PMatrix> {
    if p.n() != q.n() {
        return Err(Error::DimensionMismatch {
            expected: p.n(),
            found: q.n(),
        });
    }
    p.inverse()?.mul(q.mat())
}

/// Eigenvalue logs of `P⁻¹Q`, when every eigenvalue is a finite exact series.
pub fn weyl_vector(p: &PDPoint, q: &PDPoint) -> Result<WeylVector> {
    let m = relative(p, q)?;
    let roots = finite_roots(&charpoly(&m)?)?.ok_or_else(|| {
        Error::NotSupported("eigenvalues are not finite series; use valuation_distance".into())
    })?;
    let logs = roots
        .into_iter()
        .map(LogElement::lg)
        .collect::<Result<Vec<_>>>()?;
    WeylVector::from_unsorted(logs)
}

/// The Λ-valued distance `Σ |lg λ_i(P⁻¹Q)|`.
pub fn lambda_distance(p: &PDPoint, q: &PDPoint) -> Result<LogElement> {
    weyl_vector(p, q)?.norm(default_depth())
}

/// `-ord λ_i(P⁻¹Q)`, sorted descending.
pub fn valuation_vector(p: &PDPoint, q: &PDPoint) -> Result<Vec<ValueGroupElement>> {
    if p.n() == q.n() && p.is_diagonal() && q.is_diagonal() {
        // eigenvalues are the ratios q_ii / p_ii
        let mut v = (0..p.n())
            .map(|i| {
                Ok(ValueGroupElement(
                    p.mat[(i, i)].ord_nonzero()? - q.mat[(i, i)].ord_nonzero()?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        v.sort_by(|a, b| b.cmp(a));
        return Ok(v);
    }
    let mut v: Vec<ValueGroupElement> = charpoly_root_orders(&relative(p, q)?)?
        .into_iter()
        .map(|o| ValueGroupElement(-o))
        .collect();
    v.sort_by(|a, b| b.cmp(a));
    Ok(v)
}

/// `Σ |ord λ_i(P⁻¹Q)|`, the image of [`lambda_distance`] in Γ.
pub fn valuation_distance(p: &PDPoint, q: &PDPoint) -> Result<ValueGroupElement> {
    Ok(valuation_vector(p, q)?
        .iter()
        .map(ValueGroupElement::abs)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Puiseux {
        s.parse().unwrap()
    }

    fn diag(entries: &[&str]) -> PDPoint {
        PDPoint::diagonal(entries.iter().map(|s| p(s)).collect()).unwrap()
    }

    fn pm(rows: &[&[&str]]) -> PMatrix {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        PMatrix::parse_rows(&rows).unwrap()
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        assert!(PDPoint::new(pm(&[&["1", "1"], &["0", "1"]])).is_err());
        assert!(PDPoint::new(pm(&[&["2", "0"], &["0", "1"]])).is_err());
        assert!(PDPoint::new(pm(&[&["-1", "0"], &["0", "-1"]])).is_err());
        assert!(PDPoint::new(pm(&[&["1 + t", "0"], &["0", "1 - t + t^2 + O(t^3)"]])).is_ok());
    }

    #[test]
    fn lambda_distance_examples() {
        let one = PDPoint::identity(2);
        let x = diag(&["t^(-1)", "t"]);
        let d = lambda_distance(&one, &x).unwrap();
        assert_eq!(d.carrier(), &p("t^(-2)"));
        assert!(lambda_distance(&x, &x).unwrap().is_zero().unwrap());

        let g = pm(&[&["1", "1"], &["0", "1"]]);
        let d = lambda_distance(&one.act(&g).unwrap(), &x.act(&g).unwrap()).unwrap();
        assert_eq!(d.carrier(), &p("t^(-2)"));
    }

    #[test]
    fn lambda_distance_needs_finite_eigenvalues() {
        let q = PDPoint::new(pm(&[&["2", "1"], &["1", "1"]])).unwrap();
        let err = lambda_distance(&PDPoint::identity(2), &q).unwrap_err();
        assert!(matches!(err, Error::NotSupported(_)));
        assert_eq!(
            valuation_distance(&PDPoint::identity(2), &q).unwrap(),
            ValueGroupElement::zero()
        );
    }

    #[test]
    fn valuation_distance_examples() {
        let one = PDPoint::identity(2);
        let x = diag(&["t^(-1)", "t"]);
        assert_eq!(
            valuation_distance(&one, &x).unwrap(),
            ValueGroupElement::from_integer(2)
        );
        assert_eq!(
            valuation_distance(&x, &x).unwrap(),
            ValueGroupElement::zero()
        );
        let y = diag(&["t^(-3)", "t", "t^2"]);
        assert_eq!(
            valuation_distance(&PDPoint::identity(3), &y).unwrap(),
            ValueGroupElement::from_integer(6)
        );
        assert_eq!(
            valuation_vector(&PDPoint::identity(3), &y).unwrap(),
            vec![
                ValueGroupElement::from_integer(3),
                ValueGroupElement::from_integer(-1),
                ValueGroupElement::from_integer(-2)
            ]
        );
    }

    #[test]
    fn weyl_vector_is_sorted_and_balanced() {
        let w = weyl_vector(&PDPoint::identity(3), &diag(&["t", "t^(-3)", "t^2"])).unwrap();
        let v = w.valuation_vector().unwrap();
        assert!(v.windows(2).all(|p| p[0] >= p[1]));
        assert_eq!(
            v.iter().copied().sum::<ValueGroupElement>(),
            ValueGroupElement::zero()
        );
    }

    #[test]
    fn serde_round_trip_validates() {
        let x = diag(&["t^(-1)", "t"]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(serde_json::from_str::<PDPoint>(&s).unwrap(), x);
        assert!(serde_json::from_str::<PDPoint>(r#"[["2","0"],["0","1"]]"#).is_err());
    }
}
