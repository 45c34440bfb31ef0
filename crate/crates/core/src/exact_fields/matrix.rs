use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::puiseux::{Exponent, Puiseux, Rational};
use crate::error::{Error, Result};

/// Commutative ring elements with a (possibly fallible) zero test.
pub trait Scalar: Clone + fmt::Debug + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero_checked(&self) -> Result<bool>;
}

impl Scalar for Puiseux {
    fn zero() -> Self {
        Puiseux::zero()
    }
    fn one() -> Self {
        Puiseux::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero_checked(&self) -> Result<bool> {
        Puiseux::is_zero_checked(self)
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero_checked(&self) -> Result<bool> {
        Ok(Zero::is_zero(self))
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type PMatrix = Matrix<Puiseux>;
pub type QMatrix = Matrix<Rational>;

impl<T: Scalar> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                expected: c,
                found: bad.len(),
            });
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diagonal(entries: Vec<T>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U: Scalar>(&self, f: impl Fn(&T) -> Result<U>) -> Result<Matrix<U>> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                acc = acc.add(&self[(i, k)].mul(&other[(k, j)]));
            }
            acc
        }))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, T::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, T::sub)
    }

    fn zip(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Submatrix on the given row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| {
            self[(rows[i], cols[j])].clone()
        })
    }

    /// Determinant by cofactor expansion along the first row; the matrices
    /// in this crate are at most 4x4 (minors of them even smaller).
    pub fn det(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        Ok(self.minor_det(&idx, &idx))
    }

    /// Determinant of the submatrix on `rows` x `cols` (equal lengths).
    pub fn minor_det(&self, rows: &[usize], cols: &[usize]) -> T {
        match rows.len() {
            0 => T::one(),
            1 => self[(rows[0], cols[0])].clone(),
            2 => self[(rows[0], cols[0])]
                .mul(&self[(rows[1], cols[1])])
                .sub(&self[(rows[0], cols[1])].mul(&self[(rows[1], cols[0])])),
            _ => {
                let mut acc = T::zero();
                let rest_rows = &rows[1..];
                for (k, &c) in cols.iter().enumerate() {
                    let entry = &self[(rows[0], c)];
                    if entry.is_zero_checked().unwrap_or(false) {
                        continue;
                    }
                    let rest_cols: Vec<usize> = cols
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != k)
                        .map(|(_, &x)| x)
                        .collect();
                    let term = entry.mul(&self.minor_det(rest_rows, &rest_cols));
                    acc = if k % 2 == 0 {
                        acc.add(&term)
                    } else {
                        acc.sub(&term)
                    };
                }
                acc
            }
        }
    }

    /// Classical adjoint: `adj(A) * A = det(A) * I`.
    pub fn adjugate(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        if n == 1 {
            return Ok(Self::identity(1));
        }
        Ok(Self::from_fn(n, n, |i, j| {
            // entry (i, j) is the (j, i) cofactor
            let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
            let m = self.minor_det(&rows, &cols);
            if (i + j) % 2 == 0 {
                m
            } else {
                m.neg()
            }
        }))
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc.add(&self[(i, i)]))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Rank by fraction-free elimination; zero tests must be certified.
    pub fn rank(&self) -> Result<usize> {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let mut pivot = None;
            for r in rank..m.rows {
                if !m[(r, col)].is_zero_checked()? {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(p) = pivot else { continue };
            m.swap_rows(rank, p);
            let pv = m[(rank, col)].clone();
            for r in rank + 1..m.rows {
                let f = m[(r, col)].clone();
                if f.is_zero_checked()? {
                    continue;
                }
                for c in col..m.cols {
                    let v = m[(r, c)].mul(&pv).sub(&m[(rank, c)].mul(&f));
                    m[(r, c)] = v;
                }
            }
            rank += 1;
        }
        Ok(rank)
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        Ok(Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        }))
    }

    /// The first `k` columns.
    pub fn leading_columns(&self, k: usize) -> Self {
        let cols: Vec<usize> = (0..k).collect();
        let rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&rows, &cols)
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl PMatrix {
    /// Parses a square matrix from rows of Puiseux strings.
    pub fn parse_rows<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| s.as_ref().parse())
                    .collect::<Result<Vec<Puiseux>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(parsed)
    }

    pub fn is_exact(&self) -> bool {
        self.entries().all(Puiseux::is_exact)
    }

    /// Smallest t-adic order over all nonzero entries (`None` for the zero matrix).
    pub fn min_ord(&self) -> Result<Option<Exponent>> {
        let mut best: Option<Exponent> = None;
        for x in self.entries() {
            if let Some(o) = x.ord()? {
                best = Some(best.map_or(o, |b| b.min(o)));
            }
        }
        Ok(best)
    }

    /// Right multiplication by `diag(t^e_1, ..., t^e_n)`.
    pub fn scale_columns_by_powers(&self, exps: &[Exponent]) -> Self {
        Self::from_fn(self.rows(), self.cols(), |i, j| self[(i, j)].shift(exps[j]))
    }

    /// Entrywise agreement through certified windows.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.rows() == other.rows()
            && self.cols() == other.cols()
            && self
                .entries()
                .zip(other.entries())
                .all(|(a, b)| a.agrees_with(b))
    }
}

impl Serialize for PMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Puiseux>>::deserialize(deserializer)?;
        Self::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

impl QMatrix {
    /// Reduced row echelon form over the rationals.
    pub fn rref(&self) -> Self {
        let mut m = self.clone();
        let mut lead = 0;
        for col in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(p) = (lead..m.rows).find(|&r| !Zero::is_zero(&m[(r, col)])) else {
                continue;
            };
            m.swap_rows(lead, p);
            let inv = m[(lead, col)].recip();
            for c in 0..m.cols {
                let v = &m[(lead, c)] * &inv;
                m[(lead, c)] = v;
            }
            for r in 0..m.rows {
                if r != lead && !Zero::is_zero(&m[(r, col)]) {
                    let f = m[(r, col)].clone();
                    for c in 0..m.cols {
                        let v = &m[(r, c)] - &(&f * &m[(lead, c)]);
                        m[(r, c)] = v;
                    }
                }
            }
            lead += 1;
        }
        m
    }

    /// Row-space basis in reduced echelon form.
    pub fn row_space_basis(&self) -> Vec<Vec<Rational>> {
        let r = self.rref();
        (0..r.rows)
            .map(|i| r.row(i).to_vec())
            .filter(|row| row.iter().any(|x| !Zero::is_zero(x)))
            .collect()
    }

    /// A nonzero rational vector `v` with `self * v = 0`, if one exists.
    pub fn kernel_vector(&self) -> Option<Vec<Rational>> {
        let r = self.rref();
        let mut pivot_cols = Vec::new();
        for i in 0..r.rows {
            if let Some(c) = (0..r.cols).find(|&c| !Zero::is_zero(&r[(i, c)])) {
                pivot_cols.push((i, c));
            }
        }
        let free = (0..r.cols).find(|c| !pivot_cols.iter().any(|(_, pc)| pc == c))?;
        let mut v: Vec<Rational> = vec![Zero::zero(); r.cols];
        v[free] = One::one();
        for &(i, c) in &pivot_cols {
            v[c] = -r[(i, free)].clone();
        }
        Some(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(rows: &[&[&str]]) -> PMatrix {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        PMatrix::parse_rows(&rows).unwrap()
    }

    #[test]
    fn det_and_adjugate() {
        let a = pm(&[&["1", "t^(-1)"], &["0", "1"]]);
        assert!(a.det().unwrap().is_exact_one());
        let adj = a.adjugate().unwrap();
        assert_eq!(adj, pm(&[&["1", "-t^(-1)"], &["0", "1"]]));
        let b = pm(&[&["2", "1", "0"], &["1", "t", "1"], &["0", "1", "3"]]);
        let prod = b.adjugate().unwrap().mul(&b).unwrap();
        let d = b.det().unwrap();
        assert_eq!(prod, PMatrix::identity(3).scale(&d));
    }

    #[test]
    fn rank_over_puiseux() {
        let a = pm(&[&["1", "t"], &["t^(-1)", "1"]]);
        assert_eq!(a.rank().unwrap(), 1);
        assert_eq!(PMatrix::identity(3).rank().unwrap(), 3);
    }

    #[test]
    fn kernel_vector_of_rank_deficient() {
        let q = QMatrix::from_rows(vec![
            vec![
                Rational::from_integer(1.into()),
                Rational::from_integer(2.into()),
            ],
            vec![
                Rational::from_integer(2.into()),
                Rational::from_integer(4.into()),
            ],
        ])
        .unwrap();
        let v = q.kernel_vector().unwrap();
        let col = QMatrix::from_rows(v.into_iter().map(|x| vec![x]).collect()).unwrap();
        assert!(q.mul(&col).unwrap().entries().all(|x| Zero::is_zero(x)));
    }
}
