//! Deterministic random samplers for test drivers and the axiom suite.
//!
//! Every sampler draws from a ChaCha stream keyed by `(seed, stream)`, so a
//! parallel driver can hand each instance its own stream and still produce
//! identical output regardless of scheduling.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact_fields::{Exponent, Matrix, PMatrix, Puiseux, QMatrix, Rational};

pub type SampleRng = ChaCha8Rng;

pub fn rng_for(seed: u64, stream: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Nonzero rational with small numerator and denominator.
pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    let mut n = rng.gen_range(1..=4i64);
    if rng.gen_bool(0.5) {
        n = -n;
    }
    rational(n, rng.gen_range(1..=3))
}

pub fn positive_rational<R: Rng>(rng: &mut R) -> Rational {
    rational(rng.gen_range(1..=5), rng.gen_range(1..=3))
}

/// Exponent in `[-span, span]` with denominator 1 or 2.
pub fn exponent<R: Rng>(rng: &mut R, span: i64) -> Exponent {
    let den = if rng.gen_bool(0.7) { 1 } else { 2 };
    Exponent::new(rng.gen_range(-span * den..=span * den), den)
}

/// Exact element with up to `max_terms` terms; may be zero.
pub fn puiseux<R: Rng>(rng: &mut R, max_terms: usize) -> Puiseux {
    let k = rng.gen_range(0..=max_terms);
    let terms: Vec<_> = (0..k)
        .map(|_| (exponent(rng, 3), small_rational(rng)))
        .collect();
    Puiseux::from_terms(terms, None)
}

pub fn nonzero_puiseux<R: Rng>(rng: &mut R, max_terms: usize) -> Puiseux {
    loop {
        let x = puiseux(rng, max_terms.max(1));
        if !x.is_exact_zero() {
            return x;
        }
    }
}

pub fn positive_puiseux<R: Rng>(rng: &mut R, max_terms: usize) -> Puiseux {
    let x = nonzero_puiseux(rng, max_terms);
    if x.is_positive().expect("exact") {
        x
    } else {
        -x
    }
}

/// Exponents summing to zero, with denominators up to 2.
pub fn balanced_exponents<R: Rng>(rng: &mut R, n: usize, span: i64) -> Vec<Exponent> {
    let mut v: Vec<Exponent> = (0..n - 1).map(|_| exponent(rng, span)).collect();
    let s: Exponent = v.iter().sum();
    v.push(-s);
    v
}

fn elementary(n: usize, i: usize, j: usize, x: Puiseux) -> PMatrix {
    let mut m = PMatrix::identity(n);
    m[(i, j)] = x;
    m
}

fn random_pair<R: Rng>(rng: &mut R, n: usize) -> (usize, usize) {
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    (i, j)
}

/// Element of `SL_n(F)` with exact entries: a product of elementary
/// matrices with monomial entries and a diagonal factor.
pub fn sl_element<R: Rng>(rng: &mut R, n: usize, steps: usize) -> PMatrix {
    let mut g = PMatrix::identity(n);
    for _ in 0..steps {
        let (i, j) = random_pair(rng, n);
        let x = Puiseux::monomial(small_rational(rng), exponent(rng, 1));
        g = g.mul(&elementary(n, i, j, x)).expect("square");
    }
    if rng.gen_bool(0.6) {
        let exps = balanced_exponents(rng, n, 1);
        let d = PMatrix::diagonal(exps.into_iter().map(Puiseux::t_pow).collect());
        g = g.mul(&d).expect("square");
    }
    if rng.gen_bool(0.3) {
        let (i, j) = random_pair(rng, n);
        let r = positive_rational(rng);
        let mut d = PMatrix::identity(n);
        d[(i, i)] = Puiseux::constant(r.clone());
        d[(j, j)] = Puiseux::constant(r.recip());
        g = g.mul(&d).expect("square");
    }
    g
}

/// Element of `SL_n(O)`: entries of nonnegative order, determinant one.
pub fn integral_unimodular<R: Rng>(rng: &mut R, n: usize, steps: usize) -> PMatrix {
    let mut g = PMatrix::identity(n);
    for _ in 0..steps {
        let (i, j) = random_pair(rng, n);
        let e = Exponent::new(rng.gen_range(0..=4), 2);
        let x = Puiseux::monomial(small_rational(rng), e);
        g = g.mul(&elementary(n, i, j, x)).expect("square");
    }
    g
}

/// Element of `SL_n(O)` whose residue is the identity.
pub fn residually_trivial<R: Rng>(rng: &mut R, n: usize, steps: usize) -> PMatrix {
    let mut g = PMatrix::identity(n);
    for _ in 0..steps {
        let (i, j) = random_pair(rng, n);
        let e = Exponent::new(rng.gen_range(1..=4), 2);
        let x = Puiseux::monomial(small_rational(rng), e);
        g = g.mul(&elementary(n, i, j, x)).expect("square");
    }
    g
}

/// Diagonal determinant-one matrix with positive monomial entries.
pub fn positive_diagonal<R: Rng>(rng: &mut R, n: usize, span: i64) -> PMatrix {
    let exps = balanced_exponents(rng, n, span);
    let mut coefs: Vec<Rational> = (0..n - 1).map(|_| positive_rational(rng)).collect();
    let prod: Rational = coefs.iter().fold(Rational::one(), |a, b| a * b);
    coefs.push(prod.recip());
    PMatrix::diagonal(
        exps.into_iter()
            .zip(coefs)
            .map(|(e, c)| Puiseux::monomial(c, e))
            .collect(),
    )
}

/// Symmetric positive definite determinant-one matrix `g D gᵀ`.
pub fn pd_matrix<R: Rng>(rng: &mut R, n: usize) -> PMatrix {
    let steps = rng.gen_range(1..=3);
    let g = sl_element(rng, n, steps);
    let d = positive_diagonal(rng, n, 2);
    congruence(&g, &d)
}

/// `g X gᵀ`.
pub fn congruence(g: &PMatrix, x: &PMatrix) -> PMatrix {
    g.mul(x)
        .and_then(|gx| gx.mul(&g.transpose()))
        .expect("square")
}

/// Inverse of an invertible rational matrix.
pub fn rational_inverse(m: &QMatrix) -> Option<QMatrix> {
    let det = m.det().ok()?;
    if det.is_zero() {
        return None;
    }
    let inv = det.recip();
    Some(m.adjugate().ok()?.map(|x| x * &inv))
}

/// Rational rotation `(I - S)(I + S)⁻¹` for a random antisymmetric `S`.
pub fn rational_orthogonal<R: Rng>(rng: &mut R, n: usize) -> QMatrix {
    let mut s = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.8) {
                let x = small_rational(rng);
                s[(i, j)] = x.clone();
                s[(j, i)] = -x;
            }
        }
    }
    let id = QMatrix::identity(n);
    let plus = id.add(&s).expect("square");
    let minus = id.sub(&s).expect("square");
    let k = minus
        .mul(&rational_inverse(&plus).expect("I + S is invertible"))
        .expect("square");
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    // even permutations keep the determinant at one
    if permutation_sign(&perm) < 0 {
        perm.swap(0, 1);
    }
    Matrix::from_fn(n, n, |i, j| k[(i, perm[j])].clone())
}

pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                sign = -sign;
            }
        }
    }
    sign
}

pub fn to_field(m: &QMatrix) -> PMatrix {
    m.map(|x| Puiseux::constant(x.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let a = puiseux(&mut rng_for(7, 3), 4);
        let b = puiseux(&mut rng_for(7, 3), 4);
        assert_eq!(a, b);
    }

    #[test]
    fn sampled_group_elements_have_determinant_one() {
        let mut rng = rng_for(1, 0);
        for n in 2..=3 {
            assert!(sl_element(&mut rng, n, 4).det().unwrap().is_exact_one());
            assert!(integral_unimodular(&mut rng, n, 4)
                .det()
                .unwrap()
                .is_exact_one());
            assert!(pd_matrix(&mut rng, n).det().unwrap().is_exact_one());
        }
    }

    #[test]
    fn cayley_rotations_are_orthogonal() {
        let mut rng = rng_for(2, 0);
        for n in 2..=3 {
            let k = rational_orthogonal(&mut rng, n);
            assert_eq!(k.transpose().mul(&k).unwrap(), QMatrix::identity(n));
            assert!(k.det().unwrap().is_one());
        }
    }
}
