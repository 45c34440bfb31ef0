use serde::Serialize;

use super::{valuation_distance, PDPoint};
use crate::error::Result;
use num_traits::Signed;

use crate::exact_fields::{default_depth, Exponent, PMatrix, Puiseux};
use crate::log_value::ValueGroupElement;

/// The retraction onto the diagonal flat along lower unipotent orbits:
/// `P = L D Lᵀ` with `L` unit lower triangular goes to `D`, whose entries
/// are the ratios `Δ_i / Δ_{i-1}` of leading principal minors.
pub fn retraction_to_diagonal(p: &PDPoint) -> Result<PDPoint> {
    if p.is_diagonal() {
        return Ok(p.clone());
    }
    let minors = p.leading_minors();
    // enough relative depth that the product of the ratios is still
    // certified to the default depth
    let mut depth = default_depth();
    for m in &minors {
        depth += m.ord_nonzero()?.abs() * Exponent::from(2);
    }
    let mut prev = Puiseux::one();
    let mut d = Vec::with_capacity(minors.len());
    for m in minors {
        d.push(m.divide(&prev, depth)?);
        prev = m;
    }
    PDPoint::diagonal(d)
}

/// The steps of the retraction argument for the triangle inequality, on a
/// triple `P = h·X`, `Q`, `R = h·Z` whose ends share the flat `h·A`.
#[derive(Clone, Debug, Serialize)]
pub struct TriangleWitness {
    pub d_pq: ValueGroupElement,
    pub d_qr: ValueGroupElement,
    pub d_pr: ValueGroupElement,
    /// The retraction fixes `X` and `Z`.
    pub fixes_ends: bool,
    /// It does not increase `d(X, h⁻¹Q)` or `d(h⁻¹Q, Z)`.
    pub contracts: bool,
    /// Translating by `h⁻¹` preserves all three distances.
    pub invariant: bool,
    /// The triangle inequality inside the flat.
    pub flat_triangle: bool,
}

impl TriangleWitness {
    /// Every premise holds, and so does the conclusion.
    pub fn holds(&self) -> bool {
        self.fixes_ends
            && self.contracts
            && self.invariant
            && self.flat_triangle
            && self.d_pr <= self.d_pq + self.d_qr
    }
}

/// Flat distance between diagonal points: `Σ |ord x_i - ord z_i|`.
fn flat_distance(x: &PDPoint, z: &PDPoint) -> Result<ValueGroupElement> {
    let mut s = ValueGroupElement::zero();
    for i in 0..x.n() {
        let a = x.mat()[(i, i)].ord_nonzero()?;
        let b = z.mat()[(i, i)].ord_nonzero()?;
        s = s + ValueGroupElement(a - b).abs();
    }
    Ok(s)
}

/// Runs the retraction argument for `P = h X hᵀ`, `Q`, `R = h Z hᵀ` with
/// `X`, `Z` diagonal.
pub fn triangle_via_retraction(
    h: &PMatrix,
    x: &PDPoint,
    z: &PDPoint,
    q: &PDPoint,
) -> Result<TriangleWitness> {
    let p = x.act(h)?;
    let r = z.act(h)?;
    let h_inv = h.adjugate()?;
    let q0 = q.act(&h_inv)?;
    let rq = retraction_to_diagonal(&q0)?;

    let (d_pq, d_qr, d_pr) = (
        valuation_distance(&p, q)?,
        valuation_distance(q, &r)?,
        valuation_distance(&p, &r)?,
    );
    let (d_xq, d_qz, d_xz) = (
        valuation_distance(x, &q0)?,
        valuation_distance(&q0, z)?,
        valuation_distance(x, z)?,
    );
    let (d_x_rq, d_rq_z) = (valuation_distance(x, &rq)?, valuation_distance(&rq, z)?);

    let fixes_ends = retraction_to_diagonal(x)? == *x && retraction_to_diagonal(z)? == *z;
    let contracts = d_x_rq <= d_xq && d_rq_z <= d_qz;
    let invariant = d_pq == d_xq && d_qr == d_qz && d_pr == d_xz;
    let flat_triangle =
        flat_distance(x, z)? == d_xz && flat_distance(x, &rq)? == d_x_rq && d_xz <= d_x_rq + d_rq_z;
    Ok(TriangleWitness {
        d_pq,
        d_qr,
        d_pr,
        fixes_ends,
        contracts,
        invariant,
        flat_triangle,
    })
}
