use num_traits::Zero;

use super::is_certified_one;
use crate::error::{Error, Result};
use crate::exact_fields::{Exponent, PMatrix, Puiseux};
use crate::report::CheckReport;
use crate::sampling;

/// `g = k·a·u` in squared form. `q = k·a` has orthogonal columns and
/// `a_squared[i] = ‖q_i‖²`; the factors `k` and `a` themselves need square
/// roots of the column norms and are computed on demand.
#[derive(Clone, Debug, PartialEq)]
pub struct Iwasawa {
    pub q: PMatrix,
    pub a_squared: Vec<Puiseux>,
    pub u: PMatrix,
}

fn dot(x: &[Puiseux], y: &[Puiseux]) -> Puiseux {
    x.iter()
        .zip(y)
        .fold(Puiseux::zero(), |acc, (a, b)| &acc + &(a * b))
}

/// Gram-Schmidt on the columns of `g`, which must have determinant one.
/// Divisions are exact where the quotient is a finite series and
/// certified to relative depth `depth` otherwise.
pub fn iwasawa(g: &PMatrix, depth: Exponent) -> Result<Iwasawa> {
    let n = g.rows();
    if !g.is_square() {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g.cols(),
        });
    }
    let det = g.det()?;
    if det.is_zero_checked()? {
        return Err(Error::SingularMatrix);
    }
    if !is_certified_one(&det) {
        return Err(Error::InvalidPoint(format!(
            "determinant is {}, not 1",
            det
        )));
    }
    let mut qs: Vec<Vec<Puiseux>> = Vec::with_capacity(n);
    let mut norms: Vec<Puiseux> = Vec::with_capacity(n);
    let mut u = PMatrix::identity(n);
    for j in 0..n {
        let col = g.column(j);
        let mut v = col.clone();
        for i in 0..j {
            let c = dot(&col, &qs[i]).divide(&norms[i], depth)?;
            for (vr, qr) in v.iter_mut().zip(&qs[i]) {
                *vr = &*vr - &(&c * qr);
            }
            u[(i, j)] = c;
        }
        let norm = dot(&v, &v);
        if norm.is_zero_checked()? {
            return Err(Error::SingularMatrix);
        }
        qs.push(v);
        norms.push(norm);
    }
    let q = PMatrix::from_fn(n, n, |i, j| qs[j][i].clone());
    Ok(Iwasawa {
        q,
        a_squared: norms,
        u,
    })
}

impl Iwasawa {
    /// The diagonal factor; `NotSupported` when a column norm has an
    /// irrational square root.
    pub fn a(&self, depth: Exponent) -> Result<PMatrix> {
        let roots = self
            .a_squared
            .iter()
            .map(|x| x.sqrt(depth))
            .collect::<Result<Vec<_>>>()?;
        Ok(PMatrix::diagonal(roots))
    }

    /// The orthogonal factor `q·a⁻¹`.
    pub fn k(&self, depth: Exponent) -> Result<PMatrix> {
        let a = self.a(depth)?;
        let n = self.q.rows();
        let mut k = self.q.clone();
        for j in 0..n {
            for i in 0..n {
                k[(i, j)] = self.q[(i, j)].divide(&a[(j, j)], depth)?;
            }
        }
        Ok(k)
    }

    /// `ν(a_i) = ord(‖q_i‖²) / 2`.
    pub fn a_orders(&self) -> Result<Vec<Exponent>> {
        self.a_squared
            .iter()
            .map(|x| Ok(x.ord_nonzero()? / Exponent::from(2)))
            .collect()
    }

    /// `q·u` agrees with `g` through the certified window.
    pub fn reconstructs(&self, g: &PMatrix) -> bool {
        self.q
            .mul(&self.u)
            .map(|m| m.agrees_with(g))
            .unwrap_or(false)
    }
}

/// `ν(a_i)` for the a-part of `g`, from the leading minors of `gᵀg`:
/// `ν(a_i) = (ord Δ_i - ord Δ_{i-1}) / 2`. Needs no division.
pub fn iwasawa_a_orders(g: &PMatrix) -> Result<Vec<Exponent>> {
    let gram = g.transpose().mul(g)?;
    let mut prev = Exponent::zero();
    let mut out = Vec::with_capacity(g.cols());
    for k in 1..=g.cols() {
        let idx: Vec<usize> = (0..k).collect();
        let minor = gram.minor_det(&idx, &idx);
        let o = minor.ord()?.ok_or(Error::SingularMatrix)?;
        out.push((o - prev) / Exponent::from(2));
        prev = o;
    }
    Ok(out)
}

/// `v ≺ lambda`: the sorted partial sums of `v` are bounded by those of
/// `lambda` and the totals agree. For permutation orbits this is
/// membership of `v` in the convex hull of the orbit of `lambda`.
pub fn majorized(v: &[Exponent], lambda: &[Exponent]) -> bool {
    if v.len() != lambda.len() {
        return false;
    }
    let mut v = v.to_vec();
    let mut l = lambda.to_vec();
    v.sort_by(|a, b| b.cmp(a));
    l.sort_by(|a, b| b.cmp(a));
    let (mut sv, mut sl) = (Exponent::zero(), Exponent::zero());
    for (x, y) in v.iter().zip(&l) {
        sv += x;
        sl += y;
        if sv > sl {
            return false;
        }
    }
    sv == sl
}

fn diagonal_log_vector(a: &PMatrix) -> Result<Vec<Exponent>> {
    let n = a.rows();
    for i in 0..n {
        for j in 0..n {
            if i != j && !a[(i, j)].is_exact_zero() {
                return Err(Error::InvalidPoint("a must be diagonal".into()));
            }
        }
        if !a[(i, i)].is_positive()? {
            return Err(Error::InvalidPoint(format!(
                "diagonal entry {} is not positive",
                a[(i, i)]
            )));
        }
    }
    if !is_certified_one(&a.det()?) {
        return Err(Error::InvalidPoint("a must have determinant 1".into()));
    }
    (0..n).map(|i| Ok(-a[(i, i)].ord_nonzero()?)).collect()
}

/// One Kostant instance: the valuation vector of the a-part of `a·k`
/// must be majorized by that of `a`.
pub(crate) fn kostant_instance(rep: &mut CheckReport, a: &PMatrix, k: &PMatrix) -> Result<()> {
    let lambda = diagonal_log_vector(a)?;
    let g = a.mul(k)?;
    let v: Vec<Exponent> = iwasawa_a_orders(&g)?.into_iter().map(|x| -x).collect();
    rep.check(majorized(&v, &lambda), || {
        format!(
            "a-part vector {:?} of a*k outside the hull of {:?} (k = {:?})",
            v,
            lambda,
            k.to_rows()
        )
    });
    Ok(())
}

/// Kostant convexity at the level of valuations: for `k = 1` and
/// `samples - 1` rational rotations `k`, the a-part of `a·k` lies in the
/// convex hull of the Weyl orbit of `a`.
pub fn kostant_check(a: &PMatrix, samples: usize, seed: u64) -> CheckReport {
    let mut report = CheckReport::new("kostant convexity");
    let n = a.rows();
    for i in 0..samples {
        let k = if i == 0 {
            PMatrix::identity(n)
        } else {
            sampling::to_field(&sampling::rational_orthogonal(
                &mut sampling::rng_for(seed, i as u64),
                n,
            ))
        };
        report.run(&format!("rotation {}", i), |rep| {
            kostant_instance(rep, a, &k)
        });
    }
    report
}
