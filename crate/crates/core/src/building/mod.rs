//! The affine building `SL_n(R)/SL_n(O)`.
//!
//! A point is a coset `g·SL_n(O)`, stored through any representative whose
//! determinant is a unit of `O`. Distances come from elementary divisors:
//! if `x⁻¹y` has Smith orders `e_1 ≤ … ≤ e_n` the vector distance is
//! `-2e` sorted descending. The factor two is what makes the projection
//! from `P_n` distance preserving, since `X = g gᵀ` squares the scale.
//!
//! Apartments are charts `c ↦ f·diag(t^(-c_1/2), …, t^(-c_n/2))` on the
//! model `A = {c ∈ Γⁿ : Σ c_i = 0}`, whose metric is `Σ |c_i - c'_i|`.

mod axioms;
mod bruhat;
mod chart;
mod flags;
mod overlap;
mod retract;
mod smith;
mod tree;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use axioms::{axiom_suite, retraction_suite, AxiomReport, InstanceReport};
pub use bruhat::{common_apartment, sector_on_chart, CommonApartment};
pub use chart::{
    apartment_through, is_dominant, model_distance, model_vector, regular_direction, AffineWeyl,
    ApartmentChart, ModelPoint, Sector,
};
pub use flags::{
    chamber_at_infinity, epimorphism_check, epimorphism_suite, germ_at, residue_of_flag, FieldFlag,
    ResidueFlag,
};
pub use overlap::{overlap, Overlap, Piece};
pub use retract::retract;
pub use smith::{smith, Smith};
pub use tree::{four_point_check, four_point_suite, tree_dot};

use crate::error::{Error, Result};
use crate::exact_fields::{Exponent, PMatrix};
use crate::log_value::ValueGroupElement;
use crate::report::CheckReport;
use crate::sampling;
use crate::symmetric_space::{valuation_distance, PDPoint};
use crate::valuation::is_in_o;

/// A vertex or non-vertex point of the building.
#[derive(Clone, Debug)]
pub struct BuildingPoint {
    rep: PMatrix,
}

impl BuildingPoint {
    /// Checks that `rep` is square with a unit determinant.
    pub fn new(rep: PMatrix) -> Result<Self> {
        if !rep.is_square() {
            return Err(Error::DimensionMismatch {
                expected: rep.rows(),
                found: rep.cols(),
            });
        }
        match rep.det()?.ord()? {
            Some(o) if o == Exponent::from(0) => Ok(BuildingPoint { rep }),
            Some(o) => Err(Error::InvalidPoint(format!("determinant has order {}", o))),
            None => Err(Error::SingularMatrix),
        }
    }

    /// The base point `o = SL_n(O)`.
    pub fn base(n: usize) -> Self {
        BuildingPoint {
            rep: PMatrix::identity(n),
        }
    }

    pub fn n(&self) -> usize {
        self.rep.rows()
    }

    pub fn rep(&self) -> &PMatrix {
        &self.rep
    }

    /// `g·x`.
    pub fn act(&self, g: &PMatrix) -> Result<Self> {
        Self::new(g.mul(&self.rep)?)
    }

    /// Coset equality: `x⁻¹y` has all entries in `O`.
    pub fn same_point(&self, other: &Self) -> Result<bool> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        let m = self.rep.adjugate()?.mul(&other.rep)?;
        for x in m.entries() {
            if !is_in_o(x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for BuildingPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rep
            .to_rows()
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]·o", rows.join(", "))
    }
}

impl Serialize for BuildingPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.rep.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BuildingPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rep = PMatrix::deserialize(deserializer)?;
        BuildingPoint::new(rep).map_err(serde::de::Error::custom)
    }
}

/// Vector and scalar distance, serialized as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceReport {
    pub vector: Vec<ValueGroupElement>,
    pub scalar: ValueGroupElement,
}

/// `x⁻¹y` up to a unit scalar.
fn relative(x: &BuildingPoint, y: &BuildingPoint) -> Result<PMatrix> {
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch {
            expected: x.n(),
            found: y.n(),
        });
    }
    x.rep.adjugate()?.mul(&y.rep)
}

/// Sorted (descending) vector distance; the entries sum to zero.
pub fn vector_distance(x: &BuildingPoint, y: &BuildingPoint) -> Result<DistanceReport> {
    let s = smith(&relative(x, y)?)?;
    let mut vector: Vec<ValueGroupElement> = s
        .orders
        .iter()
        .map(|o| ValueGroupElement(-*o * Exponent::from(2)))
        .collect();
    vector.sort_by(|a, b| b.cmp(a));
    let scalar = vector.iter().map(ValueGroupElement::abs).sum();
    Ok(DistanceReport { vector, scalar })
}

pub fn scalar_distance(x: &BuildingPoint, y: &BuildingPoint) -> Result<ValueGroupElement> {
    Ok(vector_distance(x, y)?.scalar)
}

/// The coset of a factor `g` with `P = g gᵀ`.
///
/// With `Δ_j` the leading principal minors, the matrix
/// `L'_ij = det P[{1..j-1, i}, {1..j}]` is lower triangular with diagonal
/// `Δ_j`, and `P = L' diag(1/(Δ_{j-1}Δ_j)) L'ᵀ`. Replacing the square roots
/// `1/√(Δ_{j-1}Δ_j)` by monomials of the same order changes the factor by a
/// diagonal unit, which leaves the coset alone.
pub fn project(p: &PDPoint) -> Result<BuildingPoint> {
    let n = p.n();
    let mat = p.mat();
    let minors = p.leading_minors();
    let mut ords = vec![Exponent::from(0)];
    for m in &minors {
        ords.push(m.ord_nonzero()?);
    }
    let mut g = PMatrix::zeros(n, n);
    for j in 0..n {
        let cols: Vec<usize> = (0..=j).collect();
        let scale = -(ords[j] + ords[j + 1]) / Exponent::from(2);
        for i in j..n {
            let mut rows: Vec<usize> = (0..j).collect();
            rows.push(i);
            g[(i, j)] = mat.minor_det(&rows, &cols).shift(scale);
        }
    }
    BuildingPoint::new(g)
}

/// `valuation_distance(P, Q)` against the building distance of the
/// projections, on sampled pairs.
pub fn quotient_suite(n: usize, samples: usize, seed: u64) -> CheckReport {
    let mut rep = CheckReport::new(format!("quotient identification n={}", n));
    for i in 0..samples {
        let mut rng = sampling::rng_for(seed, i as u64);
        rep.run(&format!("pair {}", i), |r| {
            let p = PDPoint::new(sampling::pd_matrix(&mut rng, n))?;
            let q = PDPoint::new(sampling::pd_matrix(&mut rng, n))?;
            let lhs = valuation_distance(&p, &q)?;
            let rhs = scalar_distance(&project(&p)?, &project(&q)?)?;
            r.check(lhs == rhs, || {
                format!("{} vs {} for {} and {}", lhs, rhs, p, q)
            });
            Ok(())
        });
    }
    rep
}
