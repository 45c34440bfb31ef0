//! Closed-form values for n = 2, computed without Smith forms or Newton
//! polygons, against the library.

use lambda_building::building::{project, vector_distance, BuildingPoint};
use lambda_building::exact_fields::{Exponent, PMatrix, Puiseux};
use lambda_building::log_value::ValueGroupElement;
use lambda_building::sampling;
use lambda_building::symmetric_space::{valuation_distance, PDPoint};

/// For `g ∈ SL_2` the first elementary divisor of `g` is the least entry
/// order `m`, so `d(o, g·o) = (-2m, 2m)`.
fn distance_from_base(g: &PMatrix) -> Vec<ValueGroupElement> {
    let m = g.entries().filter_map(|x| x.ord().unwrap()).min().unwrap();
    let two = Exponent::from_integer(2);
    vec![ValueGroupElement(-m * two), ValueGroupElement(m * two)]
}

/// For `P ∈ P_2` the eigenvalues are the roots of `λ² - tr·λ + 1`, so
/// their orders are `±ord tr` when `ord tr < 0` and zero otherwise.
fn distance_to_identity(p: &PMatrix) -> ValueGroupElement {
    let tr = &p[(0, 0)] + &p[(1, 1)];
    let o = tr.ord().unwrap().unwrap();
    if o < Exponent::from_integer(0) {
        ValueGroupElement(-o * Exponent::from_integer(2))
    } else {
        ValueGroupElement::zero()
    }
}

#[test]
fn building_distance_in_rank_one() {
    let o = BuildingPoint::base(2);
    for i in 0..300 {
        let mut rng = sampling::rng_for(91, i);
        let g = sampling::sl_element(&mut rng, 2, 3);
        let d = vector_distance(&o, &BuildingPoint::new(g.clone()).unwrap()).unwrap();
        assert_eq!(d.vector, distance_from_base(&g), "g = {:?}", g.to_rows());
    }
}

#[test]
fn symmetric_space_distance_in_rank_one() {
    let id = PDPoint::identity(2);
    for i in 0..300 {
        let mut rng = sampling::rng_for(92, i);
        let p = sampling::pd_matrix(&mut rng, 2);
        let expected = distance_to_identity(&p);
        let p = PDPoint::new(p).unwrap();
        assert_eq!(valuation_distance(&id, &p).unwrap(), expected);
        let o = BuildingPoint::base(2);
        assert_eq!(
            vector_distance(&o, &project(&p).unwrap()).unwrap().scalar,
            expected
        );
    }
}

#[test]
fn worked_values() {
    let id = PDPoint::identity(2);
    let d = PDPoint::diagonal(vec![
        Puiseux::t_pow(Exponent::from_integer(-1)),
        Puiseux::t(),
    ])
    .unwrap();
    assert_eq!(
        valuation_distance(&id, &d).unwrap(),
        ValueGroupElement::from_integer(2)
    );
    // [[1,1/t],[0,1]]·[[1,0],[1/t,1]] has trace of order -2 in g gᵀ
    let g = PMatrix::parse_rows(&[vec!["1 + t^(-2)", "t^(-1)"], vec!["t^(-1)", "1"]]).unwrap();
    let p = PDPoint::new(g.mul(&g.transpose()).unwrap()).unwrap();
    assert_eq!(
        valuation_distance(&id, &p).unwrap(),
        ValueGroupElement::from_integer(8)
    );
}
