//! The overlap `B = φ₁⁻¹(φ₂(A))` of two charts, in the coordinates of the
//! first.
//!
//! With `h = adj(f₂)·f₁` and `a_ij = ord h_ij`, the point `c` lies in `B`
//! exactly when `Σ_i min_j (a_ij - c_j/2) = ord det h`. That happens iff
//! some permutation `π` with `Σ a_iπ(i) = ord det h` picks a row minimum
//! in every row, so `B` is a union of pieces cut out by difference
//! constraints `c_j - c_π(i) ≤ 2(a_ij - a_iπ(i))`.

use serde::Serialize;

use super::chart::{AffineWeyl, ApartmentChart, ModelPoint};
use crate::error::{Error, Result};
use crate::exact_fields::Exponent;
use crate::log_value::ValueGroupElement;

/// Upper bounds `bound[k][j]` on `c_j - c_k`; `None` is unbounded.
pub type Bounds = Vec<Vec<Option<Exponent>>>;

#[derive(Clone, Debug, Serialize)]
pub struct Piece {
    pub perm: Vec<usize>,
    #[serde(skip)]
    pub bounds: Bounds,
}

#[derive(Clone, Debug)]
pub struct Overlap {
    n: usize,
    orders: Vec<Vec<Option<Exponent>>>,
    det_ord: Exponent,
    pub pieces: Vec<Piece>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn add_opt(a: Option<Exponent>, b: Option<Exponent>) -> Option<Exponent> {
    Some(a? + b?)
}

/// Floyd-Warshall closure; `None` when the constraints are inconsistent.
fn close(mut d: Bounds) -> Option<Bounds> {
    let n = d.len();
    for m in 0..n {
        for k in 0..n {
            for j in 0..n {
                if let Some(via) = add_opt(d[k][m], d[m][j]) {
                    if d[k][j].map_or(true, |cur| via < cur) {
                        d[k][j] = Some(via);
                    }
                }
            }
        }
    }
    if (0..n).any(|k| d[k][k].is_some_and(|x| x < Exponent::from(0))) {
        None
    } else {
        Some(d)
    }
}

/// Shifts `x` along `(1, …, 1)` onto the model hyperplane.
pub fn normalize(x: &[Exponent]) -> ModelPoint {
    let mean = x.iter().sum::<Exponent>() / Exponent::from(x.len() as i64);
    x.iter().map(|v| ValueGroupElement(*v - mean)).collect()
}

/// The points `x_j = bound[k][j]` and `x_j = -bound[j][k]`, for the `k`
/// whose bounds are all finite. They generate the closed set of `bounds`
/// under tropical combinations.
pub fn generators(bounds: &Bounds) -> Vec<ModelPoint> {
    let n = bounds.len();
    let mut out = Vec::new();
    for k in 0..n {
        if let Some(x) = (0..n).map(|j| bounds[k][j]).collect::<Option<Vec<_>>>() {
            out.push(normalize(&x));
        }
        if let Some(x) = (0..n)
            .map(|j| bounds[j][k].map(|b| -b))
            .collect::<Option<Vec<_>>>()
        {
            out.push(normalize(&x));
        }
    }
    out
}

impl Overlap {
    pub fn compute(f1: &ApartmentChart, f2: &ApartmentChart) -> Result<Self> {
        let n = f1.n();
        if f2.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: f2.n(),
            });
        }
        let h = f2.frame().adjugate()?.mul(f1.frame())?;
        let det_ord = h.det()?.ord()?.ok_or(Error::SingularMatrix)?;
        let orders = (0..n)
            .map(|i| (0..n).map(|j| h[(i, j)].ord()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut pieces = Vec::new();
        for perm in permutations(n) {
            let diag: Option<Vec<Exponent>> = (0..n).map(|i| orders[i][perm[i]]).collect();
            let Some(diag) = diag else { continue };
            if diag.iter().sum::<Exponent>() != det_ord {
                continue;
            }
            let mut d: Bounds = vec![vec![None; n]; n];
            for k in 0..n {
                d[k][k] = Some(Exponent::from(0));
            }
            for i in 0..n {
                let k = perm[i];
                for j in 0..n {
                    if let Some(a) = orders[i][j] {
                        let b = (a - diag[i]) * Exponent::from(2);
                        if d[k][j].map_or(true, |cur| b < cur) {
                            d[k][j] = Some(b);
                        }
                    }
                }
            }
            if let Some(bounds) = close(d) {
                pieces.push(Piece { perm, bounds });
            }
        }
        Ok(Overlap {
            n,
            orders,
            det_ord,
            pieces,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn contains(&self, c: &[ValueGroupElement]) -> bool {
        let mut total = Exponent::from(0);
        for row in &self.orders {
            let m = row
                .iter()
                .zip(c)
                .filter_map(|(a, x)| a.map(|a| a - x.value() / Exponent::from(2)))
                .min();
            match m {
                Some(m) => total += m,
                None => return false,
            }
        }
        total == self.det_ord
    }

    /// The transition `φ₂⁻¹ ∘ φ₁` on the piece of `perm`:
    /// `c'_i = c_π(i) - 2 a_iπ(i)`.
    pub fn transition(&self, piece: &Piece) -> AffineWeyl {
        let shift = (0..self.n)
            .map(|i| {
                let a = self.orders[i][piece.perm[i]].expect("tight permutations avoid zeros");
                ValueGroupElement(-a * Exponent::from(2))
            })
            .collect();
        AffineWeyl {
            perm: piece.perm.clone(),
            shift,
        }
    }

    /// The smallest set of difference constraints containing every piece.
    pub fn hull(&self) -> Option<Bounds> {
        let first = self.pieces.first()?;
        let mut b = first.bounds.clone();
        for p in &self.pieces[1..] {
            for k in 0..self.n {
                for j in 0..self.n {
                    b[k][j] = match (b[k][j], p.bounds[k][j]) {
                        (Some(x), Some(y)) => Some(x.max(y)),
                        _ => None,
                    };
                }
            }
        }
        Some(b)
    }

    /// Generators of every piece.
    pub fn sample_points(&self) -> Vec<ModelPoint> {
        self.pieces
            .iter()
            .flat_map(|p| generators(&p.bounds))
            .collect()
    }
}

/// Overlap of two charts.
pub fn overlap(f1: &ApartmentChart, f2: &ApartmentChart) -> Result<Overlap> {
    Overlap::compute(f1, f2)
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
    fn identical_charts_overlap_everywhere() {
        let f = ApartmentChart::standard(2);
        let ov = overlap(&f, &f).unwrap();
        assert_eq!(ov.pieces.len(), 1);
        assert!(ov.contains(&v(&[10, -10])));
        assert_eq!(ov.transition(&ov.pieces[0]), AffineWeyl::identity(2));
        assert!(
            ov.hull()
                .unwrap()
                .iter()
                .flatten()
                .filter(|b| b.is_none())
                .count()
                == 2
        );
    }

    #[test]
    fn unipotent_change_gives_a_half_apartment() {
        let f1 = ApartmentChart::standard(2);
        let f2 = ApartmentChart::new(pm(&[&["1", "t^(-1)"], &["0", "1"]])).unwrap();
        let ov = overlap(&f1, &f2).unwrap();
        // points f1(c) = diag(t^(-c1/2), t^(c1/2)) with c1 - c2 large
        assert!(ov.contains(&v(&[1, -1])));
        assert!(ov.contains(&v(&[5, -5])));
        assert!(!ov.contains(&v(&[0, 0])));
        assert!(!ov.contains(&v(&[-3, 3])));
        for c in [v(&[1, -1]), v(&[4, -4])] {
            let p = f1.point(&c).unwrap();
            let w = ov.transition(&ov.pieces[0]);
            assert_eq!(f2.locate(&p).unwrap(), Some(w.apply(&c)));
        }
    }

    #[test]
    fn disjoint_charts() {
        let f1 = ApartmentChart::standard(2);
        let f2 = ApartmentChart::new(pm(&[&["1", "-t^(-1)"], &["-1", "1 + t^(-1)"]])).unwrap();
        let ov = overlap(&f1, &f2).unwrap();
        assert!(ov.is_empty());
        assert!(!ov.contains(&v(&[0, 0])));
    }
}
