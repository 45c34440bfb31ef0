//! Characteristic polynomials, Newton polygons and exact root extraction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::PMatrix;
use super::puiseux::{Exponent, Puiseux, Rational};
use crate::error::{Error, Result};

/// Coefficients `[a_0, ..., a_n]` of a univariate polynomial, low degree first.
pub type Poly = Vec<Puiseux>;

/// `det(x I - M)` by Faddeev-LeVerrier (only integer divisions are needed).
pub fn charpoly(m: &PMatrix) -> Result<Poly> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    let n = m.rows();
    let mut coeffs = vec![Puiseux::zero(); n + 1];
    coeffs[n] = Puiseux::one();
    let ident = PMatrix::identity(n);
    let mut aux = PMatrix::zeros(n, n);
    for k in 1..=n {
        // aux_k = M aux_{k-1} + c_{n-k+1} I ; c_{n-k} = -tr(M aux_k) / k
        aux = m.mul(&aux)?.add(&ident.scale(&coeffs[n - k + 1]))?;
        let tr = m.mul(&aux)?.trace();
        let inv_k = Rational::new(BigInt::from(-1), BigInt::from(k as i64));
        coeffs[n - k] = tr.scale(&inv_k);
    }
    Ok(coeffs)
}

/// One edge of a lower Newton polygon: the roots it accounts for all have
/// t-adic order `root_order`, and there are `multiplicity` of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonEdge {
    pub start: usize,
    pub end: usize,
    pub root_order: Exponent,
}

impl NewtonEdge {
    pub fn multiplicity(&self) -> usize {
        self.end - self.start
    }
}

/// Lower convex hull of `(k, ord a_k)` over the nonzero coefficients.
pub fn newton_polygon(poly: &[Puiseux]) -> Result<Vec<NewtonEdge>> {
    let mut pts: Vec<(usize, Exponent)> = Vec::new();
    for (k, a) in poly.iter().enumerate() {
        if let Some(o) = a.ord()? {
            pts.push((k, o));
        }
    }
    let mut hull: Vec<(usize, Exponent)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop the middle point when it lies on or above the chord
            let lhs = (y2 - y1) * Exponent::from_integer((p.0 - x1) as i64);
            let rhs = (p.1 - y1) * Exponent::from_integer((x2 - x1) as i64);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    Ok(hull
        .windows(2)
        .map(|w| {
            let ((x1, y1), (x2, y2)) = (w[0], w[1]);
            let slope = (y2 - y1) / Exponent::from_integer((x2 - x1) as i64);
            NewtonEdge {
                start: x1,
                end: x2,
                root_order: -slope,
            }
        })
        .collect())
}

/// t-adic orders of the eigenvalues of `m` (with multiplicity, ascending),
/// read off the Newton polygon of its characteristic polynomial.
pub fn charpoly_root_orders(m: &PMatrix) -> Result<Vec<Exponent>> {
    let poly = charpoly(m)?;
    if poly[0].is_zero_checked()? {
        return Err(Error::SingularMatrix);
    }
    let mut orders: Vec<Exponent> = newton_polygon(&poly)?
        .into_iter()
        .flat_map(|e| std::iter::repeat(e.root_order).take(e.multiplicity()))
        .collect();
    orders.sort();
    Ok(orders)
}

pub fn eval(poly: &[Puiseux], x: &Puiseux) -> Puiseux {
    poly.iter()
        .rev()
        .fold(Puiseux::zero(), |acc, a| &(&acc * x) + a)
}

/// Coefficients of `p(r + y)` as a polynomial in `y`.
pub fn taylor_shift(poly: &[Puiseux], r: &Puiseux) -> Poly {
    // repeated synthetic division by (x - r)
    let mut work: Vec<Puiseux> = poly.to_vec();
    let n = work.len();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut carry = Puiseux::zero();
        for i in (0..work.len()).rev() {
            let v = &work[i] + &(&carry * r);
            carry = v.clone();
            work[i] = v;
        }
        // after the pass work[0] is the remainder p(r), work[1..] the quotient
        out.push(work.remove(0));
    }
    out
}

/// Quotient of `p(x)` by `(x - r)`, assuming `p(r) = 0`.
fn deflate(poly: &[Puiseux], r: &Puiseux) -> Poly {
    let n = poly.len() - 1;
    let mut q = vec![Puiseux::zero(); n];
    let mut carry = Puiseux::zero();
    for i in (1..=n).rev() {
        carry = &poly[i] + &(&carry * r);
        q[i - 1] = carry.clone();
    }
    q
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
        if d > 2_000_000 {
            return None;
        }
    }
    Some(out)
}

/// Rational roots of a polynomial with rational coefficients, without
/// multiplicity. `None` when the coefficients are too large to search.
pub fn rational_roots(coeffs: &[Rational]) -> Option<Vec<Rational>> {
    let mut c: Vec<Rational> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    let mut roots = Vec::new();
    if c.len() <= 1 {
        return Some(roots);
    }
    if c[0].is_zero() {
        roots.push(Rational::zero());
        while c.first().is_some_and(|x| x.is_zero()) {
            c.remove(0);
        }
    }
    if c.len() <= 1 {
        return Some(roots);
    }
    let lcm = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = c
        .iter()
        .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let ps = divisors(&ints[0])?;
    let qs = divisors(ints.last().expect("nonempty"))?;
    for p in &ps {
        for q in &qs {
            for sign in [1i64, -1] {
                let cand = Rational::new(p * BigInt::from(sign), q.clone());
                if roots.contains(&cand) {
                    continue;
                }
                let val = c
                    .iter()
                    .rev()
                    .fold(Rational::zero(), |acc, a| acc * &cand + a);
                if val.is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    Some(roots)
}

const MAX_ROOT_TERMS: usize = 24;

/// Searches for one root of `poly` that is a finite Puiseux polynomial,
/// refining `prefix` term by term (Newton-Puiseux) with exponents above
/// `floor`.
fn find_finite_root(
    poly: &[Puiseux],
    prefix: &Puiseux,
    floor: Option<Exponent>,
    budget: usize,
) -> Result<Option<Puiseux>> {
    let shifted = taylor_shift(poly, prefix);
    if shifted[0].is_zero_checked()? {
        return Ok(Some(prefix.clone()));
    }
    if budget == 0 {
        return Ok(None);
    }
    for edge in newton_polygon(&shifted)? {
        if floor.is_some_and(|f| edge.root_order <= f) {
            continue;
        }
        // edge polynomial in the leading coefficient of the next term
        let edge_poly: Vec<Rational> = (edge.start..=edge.end)
            .map(|k| {
                let a = &shifted[k];
                match a.leading() {
                    Some((e, c)) => {
                        let on_edge = *e
                            == shifted[edge.start].ord().ok().flatten().unwrap_or(*e)
                                - edge.root_order * Exponent::from_integer((k - edge.start) as i64);
                        if on_edge {
                            c.clone()
                        } else {
                            Rational::zero()
                        }
                    }
                    None => Rational::zero(),
                }
            })
            .collect();
        let Some(cands) = rational_roots(&edge_poly) else {
            continue;
        };
        for c in cands.into_iter().filter(|c| !c.is_zero()) {
            let next = prefix + &Puiseux::monomial(c, edge.root_order);
            if let Some(r) = find_finite_root(poly, &next, Some(edge.root_order), budget - 1)? {
                return Ok(Some(r));
            }
        }
    }
    Ok(None)
}

/// All roots of `poly` when every one of them is a finite Puiseux
/// polynomial over the rationals; `None` otherwise. The coefficients must
/// be exact.
pub fn finite_roots(poly: &[Puiseux]) -> Result<Option<Vec<Puiseux>>> {
    if poly.iter().any(|a| !a.is_exact()) {
        return Err(Error::NotSupported(
            "root extraction needs exact coefficients".into(),
        ));
    }
    let mut p: Poly = poly.to_vec();
    while p.last().is_some_and(Puiseux::is_exact_zero) {
        p.pop();
    }
    let mut roots = Vec::new();
    while p.len() > 1 {
        match find_finite_root(&p, &Puiseux::zero(), None, MAX_ROOT_TERMS)? {
            Some(r) => {
                p = deflate(&p, &r);
                roots.push(r);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(roots))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Puiseux {
        s.parse().unwrap()
    }

    fn pm(rows: &[&[&str]]) -> PMatrix {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        PMatrix::parse_rows(&rows).unwrap()
    }

    fn e(n: i64) -> Exponent {
        Exponent::from_integer(n)
    }

    #[test]
    fn charpoly_of_two_by_two() {
        let m = pm(&[&["1", "t^(-1)"], &["0", "1"]])
            .mul(&pm(&[&["1", "0"], &["t^(-1)", "1"]]))
            .unwrap();
        let cp = charpoly(&m).unwrap();
        assert_eq!(cp, vec![p("1"), p("-2 - t^(-2)"), p("1")]);
    }

    #[test]
    fn root_orders_examples() {
        let d = pm(&[&["t^(-1)", "0"], &["0", "t"]]);
        assert_eq!(charpoly_root_orders(&d).unwrap(), vec![e(-1), e(1)]);
        let m = pm(&[&["1", "t^(-1)"], &["0", "1"]])
            .mul(&pm(&[&["1", "0"], &["t^(-1)", "1"]]))
            .unwrap();
        assert_eq!(charpoly_root_orders(&m).unwrap(), vec![e(-2), e(2)]);
        assert_eq!(
            charpoly_root_orders(&PMatrix::identity(3)).unwrap(),
            vec![e(0); 3]
        );
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m = pm(&[&["1", "t"], &["t^(-1)", "1"]]);
        assert_eq!(charpoly_root_orders(&m), Err(Error::SingularMatrix));
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let poly = vec![p("1 + t"), p("-3"), p("t^(-1)"), p("2")];
        let r = p("1 - t^(1/2)");
        let shifted = taylor_shift(&poly, &r);
        let y = p("t^2 + 5");
        let lhs = eval(&shifted, &y);
        let rhs = eval(&poly, &(&r + &y));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn finds_monomial_and_polynomial_roots() {
        // (x - 2t^(-1)) (x - t/2) (x - (1 + t))
        let roots = [p("2*t^(-1)"), p("1/2*t"), p("1 + t")];
        let mut poly = vec![p("1")];
        for r in &roots {
            let mut next = vec![Puiseux::zero(); poly.len() + 1];
            for (i, a) in poly.iter().enumerate() {
                next[i + 1] = &next[i + 1] + a;
                next[i] = &next[i] - &(a * r);
            }
            poly = next;
        }
        let mut found = finite_roots(&poly).unwrap().unwrap();
        found.sort_by(|a, b| a.compare(b).unwrap());
        assert_eq!(found, vec![p("1/2*t"), p("1 + t"), p("2*t^(-1)")]);
    }

    #[test]
    fn irrational_roots_are_not_representable() {
        // x^2 - 2
        let poly = vec![p("-2"), p("0"), p("1")];
        assert_eq!(finite_roots(&poly).unwrap(), None);
        // x^2 - (1 + t): root is an infinite series
        let poly = vec![p("-1 - t"), p("0"), p("1")];
        assert_eq!(finite_roots(&poly).unwrap(), None);
    }

    #[test]
    fn rational_root_theorem() {
        let r = |n: i64| Rational::from_integer(BigInt::from(n));
        // 2x^2 - 3x + 1 = (2x - 1)(x - 1)
        let mut roots = rational_roots(&[r(1), r(-3), r(2)]).unwrap();
        roots.sort();
        assert_eq!(roots, vec![Rational::new(1.into(), 2.into()), r(1)]);
    }
}
