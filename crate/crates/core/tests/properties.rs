use proptest::prelude::*;

use lambda_building::building::{
    apartment_through, model_distance, overlap, retract, scalar_distance, vector_distance,
    ApartmentChart, BuildingPoint,
};
use lambda_building::exact_fields::{Exponent, Puiseux};
use lambda_building::log_value::ValueGroupElement;
use lambda_building::sampling;

fn point(seed: u64, n: usize, steps: usize) -> BuildingPoint {
    let mut rng = sampling::rng_for(seed, 0);
    BuildingPoint::new(sampling::sl_element(&mut rng, n, steps)).unwrap()
}

fn model_point(seed: u64, n: usize) -> Vec<ValueGroupElement> {
    let mut rng = sampling::rng_for(seed, 1);
    sampling::balanced_exponents(&mut rng, n, 3)
        .into_iter()
        .map(ValueGroupElement)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_display_round_trips(seed in any::<u64>()) {
        let mut rng = sampling::rng_for(seed, 0);
        let x = sampling::puiseux(&mut rng, 5);
        let back: Puiseux = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn building_metric_laws(a in any::<u64>(), b in any::<u64>(), c in any::<u64>(), n in 2usize..=3) {
        let (x, y, z) = (point(a, n, 3), point(b, n, 3), point(c, n, 3));
        let dxy = vector_distance(&x, &y).unwrap();
        let dyx = vector_distance(&y, &x).unwrap();
        prop_assert_eq!(dxy.scalar, dyx.scalar);
        prop_assert_eq!(dxy.vector.iter().copied().sum::<ValueGroupElement>(), ValueGroupElement::zero());
        prop_assert_eq!(scalar_distance(&x, &x).unwrap(), ValueGroupElement::zero());
        let dxz = scalar_distance(&x, &z).unwrap();
        let dzy = scalar_distance(&z, &y).unwrap();
        prop_assert!(dxy.scalar <= dxz + dzy);
        // left translation is an isometry
        let mut rng = sampling::rng_for(c, 7);
        let g = sampling::sl_element(&mut rng, n, 2);
        let moved = vector_distance(&x.act(&g).unwrap(), &y.act(&g).unwrap()).unwrap();
        prop_assert_eq!(moved, dxy);
    }

    #[test]
    fn apartments_through_two_points_are_isometric(a in any::<u64>(), b in any::<u64>(), n in 2usize..=3) {
        let (x, y) = (point(a, n, 3), point(b, n, 3));
        let ch = apartment_through(&x, &y).unwrap();
        let cx = ch.locate(&x).unwrap().unwrap();
        let cy = ch.locate(&y).unwrap().unwrap();
        prop_assert_eq!(model_distance(&cx, &cy), scalar_distance(&x, &y).unwrap());
    }

    #[test]
    fn overlap_membership_matches_locate(a in any::<u64>(), b in any::<u64>(), n in 2usize..=3) {
        let mut rng = sampling::rng_for(a, 3);
        let f1 = ApartmentChart::new(sampling::sl_element(&mut rng, n, 3)).unwrap();
        let f2 = f1.translate(&sampling::sl_element(&mut rng, n, 1)).unwrap();
        let ov = overlap(&f1, &f2).unwrap();
        let c = model_point(b, n);
        let on = f2.contains(&f1.point(&c).unwrap()).unwrap();
        prop_assert_eq!(on, ov.contains(&c));
    }

    #[test]
    fn retraction_is_a_contraction(a in any::<u64>(), b in any::<u64>(), n in 2usize..=3) {
        let mut rng = sampling::rng_for(a, 5);
        let f = ApartmentChart::new(sampling::sl_element(&mut rng, n, 3)).unwrap();
        let cx = model_point(b, n);
        let x = f.point(&cx).unwrap();
        let y = x.act(&sampling::sl_element(&mut rng, n, 2)).unwrap();
        let z = x.act(&sampling::sl_element(&mut rng, n, 2)).unwrap();
        let (ry, rz) = (retract(&f, &x, &y).unwrap(), retract(&f, &x, &z).unwrap());
        prop_assert!(model_distance(&ry, &rz) <= scalar_distance(&y, &z).unwrap());
        prop_assert_eq!(model_distance(&cx, &ry), scalar_distance(&x, &y).unwrap());
    }

    #[test]
    fn chart_points_relocate(a in any::<u64>(), b in any::<u64>(), n in 2usize..=4) {
        let mut rng = sampling::rng_for(a, 9);
        let f = ApartmentChart::new(sampling::sl_element(&mut rng, n, 3)).unwrap();
        let c = model_point(b, n);
        prop_assert_eq!(f.locate(&f.point(&c).unwrap()).unwrap(), Some(c));
    }

    #[test]
    fn valuation_is_additive(seed in any::<u64>()) {
        let mut rng = sampling::rng_for(seed, 0);
        let x = sampling::nonzero_puiseux(&mut rng, 4);
        let y = sampling::nonzero_puiseux(&mut rng, 4);
        let (ox, oy) = (x.ord_nonzero().unwrap(), y.ord_nonzero().unwrap());
        prop_assert_eq!((&x * &y).ord_nonzero().unwrap(), ox + oy);
        prop_assert!((&x + &y).ord().unwrap().map_or(true, |o: Exponent| o >= ox.min(oy)));
    }
}
