//! Fixed-point models: localization identity, chamber independence, and
//! the two-point sphere model.

use num_complex::Complex64;
use rand::Rng;

use super::gen::{chopped_quadrant, complexify, interior_direction, random_model, rng, with_plane, with_sphere};
use super::Tally;
use crate::conespline::{spline_laplace, to_f64};
use crate::localize::{
    chamber_representatives, dh_measure, is_regular, localization_sum, validate_model, FixedPointDatum,
    FixedPointModel,
};
use crate::oracle::numeric_laplace;
use crate::polycone::interior_point;
use crate::rational::{ratio, RatVec};

const MODELS: usize = 20;
const ZETAS: usize = 20;

pub fn localization_suite(seed: u64) -> super::CriterionReport {
    let mut t = Tally::new(3, "localization", "cone-spline transform vs localization sum", seed, 1e-10, 60.0);
    let mut r = rng(seed, 3);
    let mut case = 0;
    while case < MODELS {
        let m = random_model(&mut r);
        let Ok(report) = validate_model(&m) else { continue };
        case += 1;
        let spline = match dh_measure(&m, &report.xi) {
            Ok(s) => s,
            Err(e) => {
                t.fail(format!("model {case}: {e}"));
                continue;
            }
        };
        let betas: Vec<Vec<f64>> = report.renormalized.all_betas().iter().map(to_f64).collect();
        let center = to_f64(&interior_point(&report.region.cone).expect("pointed support"));
        let mut got = 0;
        while got < ZETAS {
            let Some(y) = interior_direction(&mut r, &betas, &center) else {
                t.fail(format!("model {case}: no interior direction"));
                break;
            };
            let zeta = complexify(&mut r, &y);
            if !is_regular(&m, &zeta) {
                continue;
            }
            got += 1;
            let lhs = spline_laplace(&spline, &zeta, true);
            let rhs = localization_sum(&m, &zeta, Some(&report.region));
            match (lhs, rhs) {
                (Ok(a), Ok(b)) => {
                    let dev = (a - b).norm() / b.norm().max(f64::MIN_POSITIVE);
                    t.measure(dev, || format!("model {case} at {zeta:?}: {a} vs {b}"));
                }
                (Err(e), _) => t.fail(format!("model {case}: spline transform failed: {e}")),
                (_, Err(e)) => t.fail(format!("model {case}: localization failed: {e}")),
            }
        }
    }
    t.finish()
}

/// An honest model, the normals of its admissible open cone, the box to
/// sample in, and the true density.
struct HonestModel {
    label: String,
    model: FixedPointModel,
    normals: Vec<RatVec>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    truth: Box<dyn Fn(&[f64]) -> f64>,
}

fn honest_models(seed: u64) -> Vec<HonestModel> {
    let mut out = Vec::new();
    let mut r = rng(seed, 0x4c);
    for k in 0..10u64 {
        let poly = chopped_quadrant(seed.wrapping_mul(31).wrapping_add(k), r.gen_range(1..=4));
        let top = poly.vertices.iter().flatten().copied().max().unwrap_or(0) as f64 + 3.0;
        let p2 = poly.clone();
        let flat = move |x: &[f64]| p2.contains(&x[..2]);
        let e = |d: usize, j: usize| RatVec::unit(d, j);
        let h = match k {
            0..=3 => HonestModel {
                label: format!("polygon {:?}", poly.vertices),
                model: poly.model(),
                normals: vec![e(2, 0), e(2, 1)],
                lo: vec![-1.0; 2],
                hi: vec![top; 2],
                truth: Box::new(move |x| flat(x) as u8 as f64),
            },
            4..=6 => {
                let lambda = r.gen_range(1..=3);
                let l = lambda as f64;
                HonestModel {
                    label: format!("polygon {:?} x sphere({lambda})", poly.vertices),
                    model: with_sphere(&poly, lambda),
                    normals: vec![e(3, 0), e(3, 1)],
                    lo: vec![-1.0, -1.0, -l - 1.0],
                    hi: vec![top, top, l + 1.0],
                    truth: Box::new(move |x| (flat(x) && x[2].abs() <= l) as u8 as f64),
                }
            }
            _ => HonestModel {
                label: format!("polygon {:?} x C", poly.vertices),
                model: with_plane(&poly),
                normals: vec![e(3, 0), e(3, 1), e(3, 2)],
                lo: vec![-1.0; 3],
                hi: vec![top, top, 3.0],
                truth: Box::new(move |x| (flat(x) && x[2] >= 0.0) as u8 as f64),
            },
        };
        out.push(h);
    }
    out
}

pub fn chamber_suite(seed: u64) -> super::CriterionReport {
    let mut t = Tally::new(4, "chambers", "densities from different chambers agree", seed, 1e-9, 60.0);
    let mut r = rng(seed, 4);
    let mut chambers_seen = Vec::new();
    for (k, h) in honest_models(seed).into_iter().enumerate() {
        let reps = chamber_representatives(&h.model, &h.normals, 6);
        chambers_seen.push(reps.len());
        if reps.len() < 2 {
            t.fail(format!("model {k} ({}): only {} chamber(s) found", h.label, reps.len()));
            continue;
        }
        let evals: Result<Vec<_>, _> = reps
            .iter()
            .map(|xi| dh_measure(&h.model, xi).map_err(|e| e.to_string()).and_then(|s| s.evaluator().map_err(|e| e.to_string())))
            .collect();
        let evals = match evals {
            Ok(v) => v,
            Err(e) => {
                t.fail(format!("model {k} ({}): {e}", h.label));
                continue;
            }
        };
        let (mut spread, mut truth_dev) = (0.0f64, 0.0f64);
        for _ in 0..100 {
            let mu: Vec<f64> = h.lo.iter().zip(&h.hi).map(|(a, b)| r.gen_range(*a..*b)).collect();
            let vals: Vec<f64> = evals.iter().map(|e| e.density_f64(&mu)).collect();
            for v in &vals[1..] {
                spread = spread.max((v - vals[0]).abs());
            }
            truth_dev = truth_dev.max((vals[0] - (h.truth)(&mu)).abs());
        }
        t.measure(spread.max(truth_dev), || {
            format!("model {k} ({}): chamber spread {spread:.3e}, deviation from the polytope indicator {truth_dev:.3e}", h.label)
        });
    }
    t.note(format!("chambers compared per model: {chambers_seen:?}"));
    t.finish()
}

pub(crate) fn sphere_model(lambda: &RatVec) -> FixedPointModel {
    let points = vec![
        FixedPointDatum { image: -lambda, weights: vec![RatVec::from_ints(&[1])] },
        FixedPointDatum { image: lambda.clone(), weights: vec![RatVec::from_ints(&[-1])] },
    ];
    FixedPointModel::new(1, 1, points, None).expect("two-point model")
}

pub fn sphere_suite(seed: u64) -> super::CriterionReport {
    let mut t = Tally::new(7, "sphere", "sphere model: flat density and sine transform", seed, 1.0, 10.0);
    t.note("deviations are in units of their tolerance: 1e-9 for densities, 1e-6 for transforms".into());
    let mut r = rng(seed, 7);
    for lambda in [ratio(3, 2), ratio(5, 4)] {
        let lam = RatVec(vec![lambda.clone()]);
        let l = crate::rational::rat_to_f64(&lambda);
        let m = sphere_model(&lam);
        let ev = match validate_model(&m).and_then(|v| dh_measure(&m, &v.xi)).map(|s| s.evaluator()) {
            Ok(Ok(e)) => e,
            Ok(Err(e)) => return fail_with(t, e.to_string()),
            Err(e) => return fail_with(t, e.to_string()),
        };
        let mut flat = 0.0f64;
        for k in 0..=400 {
            let mu = -2.0 * l + 4.0 * l * k as f64 / 400.0;
            if (mu.abs() - l).abs() < 1e-6 {
                continue;
            }
            let want = if mu.abs() < l { 1.0 } else { 0.0 };
            flat = flat.max((ev.density_f64(&[mu]) - want).abs());
        }
        t.measure_against(flat, 1e-9, || format!("lambda {l}: density is not the indicator of [-{l}, {l}]"));

        let density = |x: &[f64]| ev.density_f64(x);
        let breaks = vec![vec![-2.0 * l, -l, l, 2.0 * l]];
        for _ in 0..10 {
            let z = r.gen_range(0.2..6.0) * if r.gen_bool(0.5) { 1.0 } else { -1.0 };
            let zeta = [Complex64::new(z, 0.0)];
            let want = 2.0 * (z * l).sin() / z;
            let numeric = numeric_laplace(&density, &zeta, &breaks, 24, None);
            let closed = localization_sum(&m, &zeta, None);
            match (numeric, closed) {
                (Ok(a), Ok(b)) => {
                    let dev = (a.value - want).norm().max((b - want).norm());
                    t.measure_against(dev, 1e-6, || format!("lambda {l}, z {z}: {} / {b} vs {want}", a.value));
                }
                (Err(e), _) => t.fail(format!("lambda {l}, z {z}: numeric transform failed: {e}")),
                (_, Err(e)) => t.fail(format!("lambda {l}, z {z}: localization failed: {e}")),
            }
        }
    }
    t.finish()
}

fn fail_with(mut t: Tally, msg: String) -> super::CriterionReport {
    t.fail(msg);
    t.finish()
}
