use num_complex::Complex64;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use dhk_core::conespline::{heaviside_density, spline_density, ConeSplineTerm, SignedConeSpline};
use dhk_core::localize::{dh_measure, localization_sum, renormalize, FixedPointDatum, FixedPointModel};
use dhk_core::polycone::rays::halfspaces_to_generators;
use dhk_core::polycone::{
    asymptotic_cone, dual_cone, is_compact, is_proper, proper_projection_directions, Cone, PolyhedralDoc,
    PolyhedralSet,
};
use dhk_core::rational::{rat, RatVec};

fn int_rows(d: usize, m: usize) -> impl Strategy<Value = Vec<(Vec<i64>, i64)>> {
    prop::collection::vec((prop::collection::vec(-3i64..=3, d), -4i64..=0), 1..=m)
}

fn set_from(d: usize, rows: &[(Vec<i64>, i64)]) -> Option<PolyhedralSet> {
    let data: Vec<(&[i64], i64)> = rows.iter().filter(|(n, _)| n.iter().any(|&x| x != 0)).map(|(n, b)| (n.as_slice(), *b)).collect();
    if data.is_empty() {
        return None;
    }
    // offsets <= 0 keep the origin inside, so the set is never empty
    PolyhedralSet::from_ints(d, &data).ok()
}

fn v(xs: &[i64]) -> RatVec {
    RatVec::from_ints(xs)
}

/// `[0, a] x [0, b]` as a product of two spheres.
fn rectangle(a: i64, b: i64) -> FixedPointModel {
    let pts = [(0, 0, 1, 1), (a, 0, -1, 1), (0, b, 1, -1), (a, b, -1, -1)];
    let points = pts
        .iter()
        .map(|&(x, y, s, t)| FixedPointDatum { image: v(&[x, y]), weights: vec![v(&[s, 0]), v(&[0, t])] })
        .collect();
    FixedPointModel::new(2, 2, points, None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generators_lie_in_the_cone(rows in int_rows(3, 6)) {
        let normals: Vec<RatVec> = rows.iter().map(|(n, _)| v(n)).collect();
        let g = halfspaces_to_generators(&normals, 3).unwrap();
        for r in &g.rays {
            prop_assert!(normals.iter().all(|n| !n.dot(r).is_negative()));
        }
        for l in &g.lineality {
            prop_assert!(normals.iter().all(|n| n.dot(l).is_zero()));
        }
    }

    #[test]
    fn dual_pairs_nonnegatively(gens in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 1..=5)) {
        let gens: Vec<RatVec> = gens.iter().map(|g| v(g)).filter(|g| !g.is_zero()).collect();
        prop_assume!(!gens.is_empty());
        let c = Cone::from_generators(3, gens.clone()).unwrap();
        let dual = dual_cone(&c).unwrap().generator_list().unwrap();
        for y in &dual {
            for x in &gens {
                prop_assert!(!y.dot(x).is_negative());
            }
        }
    }

    #[test]
    fn compact_sets_are_proper(rows in int_rows(2, 6)) {
        let Some(p) = set_from(2, &rows) else { return Ok(()) };
        if is_compact(&p).unwrap() {
            prop_assert!(is_proper(&p).unwrap());
            prop_assert!(asymptotic_cone(&p).is_zero().unwrap());
        }
    }

    #[test]
    fn proper_projection_is_symmetric(rows in int_rows(3, 5), xi in prop::collection::vec(-3i64..=3, 3)) {
        let Some(p) = set_from(3, &rows) else { return Ok(()) };
        let xi = v(&xi);
        prop_assume!(!xi.is_zero());
        let (a, b) = (proper_projection_directions(&p, &xi).unwrap(), proper_projection_directions(&p, &(-&xi)).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn polyhedral_json_round_trip(rows in int_rows(3, 5)) {
        let Some(p) = set_from(3, &rows) else { return Ok(()) };
        let doc = PolyhedralDoc::from_set(&p);
        let back = PolyhedralDoc::from_json(&serde_json::to_string(&doc).unwrap()).unwrap();
        prop_assert_eq!(back.to_polyhedral_set().unwrap(), p);
    }

    #[test]
    fn heaviside_density_is_homogeneous(
        gens in prop::collection::vec(prop::collection::vec(1i64..=3, 2), 3..=4),
        mu in prop::collection::vec(0.5f64..4.0, 2),
        t in 0.5f64..3.0,
    ) {
        let factors: Vec<RatVec> = gens.iter().map(|g| v(g)).collect();
        let (Ok(a), Ok(b)) = (heaviside_density(&factors, &mu), heaviside_density(&factors, &[t * mu[0], t * mu[1]])) else {
            return Ok(());
        };
        let expect = a * t.powi(factors.len() as i32 - 2);
        prop_assert!((b - expect).abs() <= 1e-9 * (1.0 + expect.abs()), "{b} vs {expect}");
    }

    #[test]
    fn epsilon_flips_with_xi(x in -5i64..=5, y in -5i64..=5) {
        let m = rectangle(2, 1);
        let xi = v(&[x, y]);
        prop_assume!(x != 0 && y != 0);
        let a = renormalize(&m, &xi).unwrap();
        let b = renormalize(&m, &(-&xi)).unwrap();
        for (p, q) in a.points.iter().zip(&b.points) {
            prop_assert_eq!(q.epsilon, p.epsilon * (-1i32).pow(m.halfdim() as u32));
            for (u, w) in p.betas.iter().zip(&q.betas) {
                prop_assert_eq!(w, &(-u));
            }
        }
    }

    #[test]
    fn compact_density_ignores_xi(x in -5i64..=5, y in -5i64..=5, mu in prop::collection::vec(-1.0f64..3.0, 2)) {
        prop_assume!(x != 0 && y != 0);
        let walls = [mu[0], mu[0] - 2.0, mu[1], mu[1] - 1.0];
        prop_assume!(walls.iter().all(|w| w.abs() > 1e-6));
        let m = rectangle(2, 1);
        let s = dh_measure(&m, &v(&[x, y])).unwrap();
        let inside = (0.0..2.0).contains(&mu[0]) && (0.0..1.0).contains(&mu[1]);
        let got = spline_density(&s, &mu).unwrap().value;
        prop_assert!((got - if inside { 1.0 } else { 0.0 }).abs() < 1e-12, "{got} at {mu:?}");
    }

    #[test]
    fn reordering_points_and_weights_changes_nothing(seed in 0u64..1000, rot in 0usize..4) {
        let p = dhk_core::verify::chopped_quadrant(seed, 3);
        let m = p.model();
        let mut points = m.points().to_vec();
        let k = rot % points.len();
        points.rotate_left(k);
        for pt in &mut points {
            pt.weights.reverse();
        }
        let shuffled = FixedPointModel::new(m.dim(), m.halfdim(), points, None).unwrap();
        let xi = v(&[2, 3]);
        let a = dh_measure(&m, &xi).unwrap();
        let b = dh_measure(&shuffled, &xi).unwrap();
        let zeta = [Complex64::new(0.3, 1.1), Complex64::new(-0.7, 0.9)];
        let (la, lb) = (localization_sum(&m, &zeta, None).unwrap(), localization_sum(&shuffled, &zeta, None).unwrap());
        prop_assert!((la - lb).norm() <= 1e-12 * la.norm());
        for mu in [[0.5, 0.25], [1.3, 2.7], [7.1, 0.4]] {
            let (da, db) = (spline_density(&a, &mu).unwrap().value, spline_density(&b, &mu).unwrap().value);
            prop_assert!((da - db).abs() < 1e-12);
        }
    }
}

#[test]
fn spline_json_round_trip() {
    let s = SignedConeSpline::new(
        2,
        vec![
            ConeSplineTerm::new(1, v(&[0, 0]), vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1])]).unwrap(),
            ConeSplineTerm::new(-1, RatVec(vec![rat(1), dhk_core::rational::ratio(1, 2)]), vec![v(&[1, 0]), v(&[0, 1]), v(&[2, 1])])
                .unwrap(),
        ],
        None,
    )
    .unwrap();
    assert_eq!(SignedConeSpline::from_json(&s.to_json()).unwrap(), s);
}

#[test]
fn model_json_round_trip() {
    let m = rectangle(3, 2);
    assert_eq!(FixedPointModel::from_json(&m.to_json()).unwrap(), m);
}
