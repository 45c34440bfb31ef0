use serde::Serialize;

use super::{relative, smith, BuildingPoint};
use crate::error::{Error, Result};
use crate::exact_fields::{Exponent, PMatrix, Puiseux};
use crate::log_value::ValueGroupElement;

/// A point of the model apartment: coordinates summing to zero.
pub type ModelPoint = Vec<ValueGroupElement>;

/// `Σ |a_i - b_i|`.
pub fn model_distance(a: &[ValueGroupElement], b: &[ValueGroupElement]) -> ValueGroupElement {
    a.iter().zip(b).map(|(x, y)| (*x - *y).abs()).sum()
}

/// `b - a`, sorted descending.
pub fn model_vector(a: &[ValueGroupElement], b: &[ValueGroupElement]) -> Vec<ValueGroupElement> {
    let mut v: Vec<ValueGroupElement> = a.iter().zip(b).map(|(x, y)| *y - *x).collect();
    v.sort_by(|p, q| q.cmp(p));
    v
}

pub(crate) fn add_points(a: &[ValueGroupElement], b: &[ValueGroupElement]) -> ModelPoint {
    a.iter().zip(b).map(|(x, y)| *x + *y).collect()
}

pub(crate) fn half_negated(c: &[ValueGroupElement]) -> Vec<Exponent> {
    c.iter().map(|x| -x.value() / Exponent::from(2)).collect()
}

/// `w(c)_i = c_{perm[i]} + shift_i`, an element of the affine Weyl group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineWeyl {
    pub perm: Vec<usize>,
    pub shift: ModelPoint,
}

impl AffineWeyl {
    pub fn identity(n: usize) -> Self {
        AffineWeyl {
            perm: (0..n).collect(),
            shift: vec![ValueGroupElement::zero(); n],
        }
    }

    pub fn apply(&self, c: &[ValueGroupElement]) -> ModelPoint {
        self.perm
            .iter()
            .zip(&self.shift)
            .map(|(&j, s)| c[j] + *s)
            .collect()
    }

    /// Translation parts that sum to zero keep the model hyperplane.
    pub fn is_special(&self) -> bool {
        self.shift.iter().copied().sum::<ValueGroupElement>() == ValueGroupElement::zero()
    }
}

/// A chart of an apartment, `c ↦ frame·diag(t^(-c_i/2))·o`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApartmentChart {
    frame: PMatrix,
}

impl ApartmentChart {
    /// The frame must have a unit determinant.
    pub fn new(frame: PMatrix) -> Result<Self> {
        BuildingPoint::new(frame.clone())?;
        Ok(ApartmentChart { frame })
    }

    pub fn standard(n: usize) -> Self {
        ApartmentChart {
            frame: PMatrix::identity(n),
        }
    }

    pub fn n(&self) -> usize {
        self.frame.rows()
    }

    pub fn frame(&self) -> &PMatrix {
        &self.frame
    }

    /// `frame·diag(t^(-c_i/2))`, a basis of the lattice at `c`.
    pub fn basis_at(&self, c: &[ValueGroupElement]) -> PMatrix {
        self.frame.scale_columns_by_powers(&half_negated(c))
    }

    pub fn point(&self, c: &[ValueGroupElement]) -> Result<BuildingPoint> {
        if c.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: c.len(),
            });
        }
        if c.iter().copied().sum::<ValueGroupElement>() != ValueGroupElement::zero() {
            return Err(Error::InvalidPoint(
                "model coordinates must sum to zero".into(),
            ));
        }
        BuildingPoint::new(self.basis_at(c))
    }

    /// Coordinates of `p` if it lies on the apartment. With
    /// `m = adj(frame)·p` and `k_i` the least order in row `i`, the point is
    /// on the apartment exactly when `Σ k_i = ord det m`, and then `c = -2k`.
    pub fn locate(&self, p: &BuildingPoint) -> Result<Option<ModelPoint>> {
        let m = self.frame.adjugate()?.mul(p.rep())?;
        let det_ord = m.det()?.ord()?.ok_or(Error::SingularMatrix)?;
        let mut ks = Vec::with_capacity(self.n());
        for i in 0..self.n() {
            let mut best: Option<Exponent> = None;
            for x in m.row(i) {
                if let Some(o) = x.ord()? {
                    best = Some(best.map_or(o, |b| b.min(o)));
                }
            }
            ks.push(best.ok_or(Error::SingularMatrix)?);
        }
        if ks.iter().sum::<Exponent>() != det_ord {
            return Ok(None);
        }
        Ok(Some(
            ks.into_iter()
                .map(|k| ValueGroupElement(-k * Exponent::from(2)))
                .collect(),
        ))
    }

    pub fn contains(&self, p: &BuildingPoint) -> Result<bool> {
        Ok(self.locate(p)?.is_some())
    }

    /// The chart `chart ∘ w`, with frame `frame·diag(t^(-shift/2))·P_w`.
    pub fn compose(&self, w: &AffineWeyl) -> Result<Self> {
        let n = self.n();
        let scaled = self.basis_at(&w.shift);
        let mut perm = PMatrix::zeros(n, n);
        for (i, &j) in w.perm.iter().enumerate() {
            perm[(i, j)] = Puiseux::one();
        }
        Self::new(scaled.mul(&perm)?)
    }

    /// `g·chart`.
    pub fn translate(&self, g: &PMatrix) -> Result<Self> {
        Self::new(g.mul(&self.frame)?)
    }
}

/// A sector `tip + S₀` in a chart, with `S₀ = {v : v_1 ≥ … ≥ v_n}` the
/// dominant cone.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sector {
    pub chart: ApartmentChart,
    pub tip: ModelPoint,
}

impl Sector {
    pub fn new(chart: ApartmentChart, tip: ModelPoint) -> Result<Self> {
        if tip.len() != chart.n() {
            return Err(Error::DimensionMismatch {
                expected: chart.n(),
                found: tip.len(),
            });
        }
        Ok(Sector { chart, tip })
    }

    pub fn standard(n: usize) -> Self {
        Sector {
            chart: ApartmentChart::standard(n),
            tip: vec![ValueGroupElement::zero(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.chart.n()
    }

    pub fn base(&self) -> Result<BuildingPoint> {
        self.chart.point(&self.tip)
    }

    /// `tip + v` for dominant `v`.
    pub fn point(&self, v: &[ValueGroupElement]) -> Result<BuildingPoint> {
        if !is_dominant(v) {
            return Err(Error::InvalidPoint(
                "direction is not in the dominant cone".into(),
            ));
        }
        self.chart.point(&add_points(&self.tip, v))
    }

    /// The subsector with tip moved by the dominant vector `v`.
    pub fn subsector(&self, v: &[ValueGroupElement]) -> Result<Self> {
        if !is_dominant(v) {
            return Err(Error::InvalidPoint(
                "direction is not in the dominant cone".into(),
            ));
        }
        Ok(Sector {
            chart: self.chart.clone(),
            tip: add_points(&self.tip, v),
        })
    }

    /// The same sector written in a chart centered at its tip.
    pub fn recentered(&self) -> Result<Self> {
        let chart = ApartmentChart::new(self.chart.basis_at(&self.tip))?;
        Ok(Sector {
            chart,
            tip: vec![ValueGroupElement::zero(); self.n()],
        })
    }
}

pub fn is_dominant(v: &[ValueGroupElement]) -> bool {
    v.windows(2).all(|p| p[0] >= p[1])
        && v.iter().copied().sum::<ValueGroupElement>() == ValueGroupElement::zero()
}

/// `(n-1, n-3, …, 1-n)`, a regular dominant direction.
pub fn regular_direction(n: usize) -> ModelPoint {
    (0..n)
        .map(|i| ValueGroupElement::from_integer(n as i64 - 1 - 2 * i as i64))
        .collect()
}

/// The apartment of the Smith decomposition of `x⁻¹y`: `x` sits at the
/// origin and `y` at `-2·orders`.
pub fn apartment_through(x: &BuildingPoint, y: &BuildingPoint) -> Result<ApartmentChart> {
    let s = smith(&relative(x, y)?)?;
    ApartmentChart::new(x.rep().mul(&s.left_factor()?)?)
}
