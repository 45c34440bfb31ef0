//! Smith normal form over the valuation ring `O`.
//!
//! Elimination is fraction-free: with pivot `p = t^v p'` a row is replaced
//! by `p'·row_i - (a t^-v)·row_k`, which keeps every operation integral
//! over `O` with unit determinant. Only the row operations are recorded.

use crate::error::{Error, Result};
use crate::exact_fields::{Exponent, PMatrix, Puiseux};

#[derive(Clone, Debug)]
pub struct Smith {
    /// t-adic orders of the elementary divisors, ascending.
    pub orders: Vec<Exponent>,
    /// `E ∈ GL_n(O)` with unit determinant such that `E·m ∈ diag(t^orders)·GL_n(O)`.
    pub row_ops: PMatrix,
}

impl Smith {
    /// `adj(E)`, the left factor `u₁` of `m = u₁·diag(t^orders)·u₂` up to a
    /// unit scalar.
    pub fn left_factor(&self) -> Result<PMatrix> {
        self.row_ops.adjugate()
    }
}

/// Drops terms that cannot matter, but never claims precision the input
/// does not have.
fn cut(x: &Puiseux, k: Exponent) -> Puiseux {
    match x.certified_order() {
        Some(w) if w <= k => x.clone(),
        _ => x.discard_from(k),
    }
}

fn pivot(a: &PMatrix, from: usize) -> Result<Option<(usize, usize, Exponent)>> {
    let n = a.rows();
    let mut best: Option<(usize, usize, Exponent)> = None;
    for i in from..n {
        for j in from..n {
            if let Some(o) = a[(i, j)].ord()? {
                if best.map_or(true, |(_, _, b)| o < b) {
                    best = Some((i, j, o));
                }
            }
        }
    }
    Ok(best)
}

/// Elementary divisor orders of a nonsingular square matrix, with the row
/// operations that produced them. Pivots are entries of minimal order, ties
/// going to the lowest (row, column).
pub fn smith(m: &PMatrix) -> Result<Smith> {
    let n = m.rows();
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.cols(),
        });
    }
    let det_ord = m.det()?.ord()?.ok_or(Error::SingularMatrix)?;
    let min_ord = m.min_ord()?.ok_or(Error::SingularMatrix)?;
    // the largest divisor order is at most det_ord - (n-1)·min_ord; terms of
    // A beyond it, and terms of E beyond it minus min_ord, do not change
    // the lattice classes involved
    let top = det_ord - Exponent::from((n - 1) as i64) * min_ord;
    let cut_a = top + Exponent::from(1);
    let cut_e = top - min_ord + Exponent::from(1);

    let mut a = m.map(|x| cut(x, cut_a));
    let mut e = PMatrix::identity(n);
    let mut orders = Vec::with_capacity(n);
    for k in 0..n {
        let (r, c, v) = pivot(&a, k)?.ok_or(Error::SingularMatrix)?;
        a.swap_rows(k, r);
        e.swap_rows(k, r);
        a.swap_cols(k, c);
        let p_unit = a[(k, k)].shift(-v);
        for i in k + 1..n {
            if a[(i, k)].is_zero_checked()? {
                continue;
            }
            let f = a[(i, k)].shift(-v);
            for j in 0..n {
                let x = &(&p_unit * &a[(i, j)]) - &(&f * &a[(k, j)]);
                a[(i, j)] = cut(&x, cut_a);
                let y = &(&p_unit * &e[(i, j)]) - &(&f * &e[(k, j)]);
                e[(i, j)] = cut(&y, cut_e);
            }
        }
        for j in k + 1..n {
            if a[(k, j)].is_zero_checked()? {
                continue;
            }
            let f = a[(k, j)].shift(-v);
            for i in 0..n {
                let x = &(&p_unit * &a[(i, j)]) - &(&f * &a[(i, k)]);
                a[(i, j)] = cut(&x, cut_a);
            }
        }
        orders.push(v);
    }
    Ok(Smith { orders, row_ops: e })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(rows: &[&[&str]]) -> PMatrix {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        PMatrix::parse_rows(&rows).unwrap()
    }

    fn e(n: i64) -> Exponent {
        Exponent::from(n)
    }

    #[test]
    fn diagonal_and_unipotent_examples() {
        let s = smith(&pm(&[&["t^(-1)", "0"], &["0", "t"]])).unwrap();
        assert_eq!(s.orders, vec![e(-1), e(1)]);
        let s = smith(&pm(&[&["1", "t^(-1)"], &["0", "1"]])).unwrap();
        assert_eq!(s.orders, vec![e(-1), e(1)]);
        assert_eq!(s.left_factor().unwrap(), pm(&[&["1", "0"], &["t", "1"]]));
        let s = smith(&PMatrix::identity(3)).unwrap();
        assert_eq!(s.orders, vec![e(0); 3]);
    }

    #[test]
    fn singular_input_is_rejected() {
        assert!(matches!(
            smith(&pm(&[&["1", "1"], &["1", "1"]])),
            Err(Error::SingularMatrix)
        ));
    }
}
