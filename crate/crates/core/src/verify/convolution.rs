//! Single-cone convolutions: transform duality and fiber volumes.

use num_complex::Complex64;
use rand::Rng;

use super::gen::{complexify, interior_direction, pointed_factors, rng};
use super::Tally;
use crate::conespline::{heaviside_density, laplace_factor, to_f64, ConeSplineTerm, SignedConeSpline};
use crate::oracle::{numeric_laplace_spline, quadrature_convolution, LaplaceConfig, LaplaceMode, QuadratureConfig};
use crate::polycone::{dual_cone, interior_point, Cone};
use crate::rational::RatVec;

const FACTOR_SETS: usize = 25;
const ZETAS: usize = 5;
const FIBER_CASES: usize = 50;

fn dims(r: &mut rand_chacha::ChaCha8Rng) -> (usize, usize) {
    let d = r.gen_range(1..=3);
    // n = d only gives a scaled indicator, so keep it rare
    let n = if r.gen_bool(0.1) { d } else { r.gen_range(d + 1..=5) };
    (n, d)
}

/// `Im zeta` directions strictly inside the dual of `cone(factors)`.
pub(crate) fn dual_interior(factors: &[RatVec]) -> Vec<f64> {
    let d = factors[0].dim();
    let cone = Cone::from_generators(d, factors.to_vec()).expect("consistent dims");
    let dual = dual_cone(&cone).expect("generated cone");
    to_f64(&interior_point(&dual).expect("pointed full-rank cone"))
}

pub fn laplace_suite(seed: u64) -> super::CriterionReport {
    let mut t = Tally::new(2, "laplace", "numeric transform of a cone density vs closed form", seed, 1e-3, 120.0);
    let mut r = rng(seed, 2);
    let cfg = LaplaceConfig { mode: LaplaceMode::Cells };
    for set in 0..FACTOR_SETS {
        let (n, d) = dims(&mut r);
        let factors = pointed_factors(&mut r, n, d);
        let ff: Vec<Vec<f64>> = factors.iter().map(to_f64).collect();
        let spline = SignedConeSpline::new(
            d,
            vec![ConeSplineTerm::new(1, RatVec::zeros(d), factors.clone()).expect("valid term")],
            None,
        )
        .expect("valid spline");
        let center = dual_interior(&factors);
        for _ in 0..ZETAS {
            let Some(y) = interior_direction(&mut r, &ff, &center) else {
                t.fail(format!("set {set}: no interior direction found"));
                continue;
            };
            let zeta: Vec<Complex64> = complexify(&mut r, &y);
            let exact = match laplace_factor(&ff, &zeta, true) {
                Ok(v) => v,
                Err(e) => {
                    t.fail(format!("set {set}: closed form failed: {e}"));
                    continue;
                }
            };
            match numeric_laplace_spline(&spline, &zeta, &cfg) {
                Ok(v) => {
                    let dev = (v.value - exact).norm() / exact.norm();
                    t.measure(dev, || format!("set {set} (n={n}, d={d}) at {zeta:?}"));
                }
                Err(e) => t.fail(format!("set {set}: numeric transform failed: {e}")),
            }
        }
    }
    t.finish()
}

pub fn fiber_suite(seed: u64) -> super::CriterionReport {
    let mut t = Tally::new(5, "convolution", "fiber volume vs nested quadrature", seed, 1e-6, 120.0);
    let mut r = rng(seed, 5);
    let cfg = QuadratureConfig::default();
    let mut inside = 0;
    for case in 0..FIBER_CASES {
        let (n, d) = dims(&mut r);
        let factors = pointed_factors(&mut r, n, d);
        let ff: Vec<Vec<f64>> = factors.iter().map(to_f64).collect();
        let mut mu = vec![0.0; d];
        for f in &ff {
            let s: f64 = r.gen_range(0.0..1.5);
            mu.iter_mut().zip(f).for_each(|(m, x)| *m += s * x);
        }
        // a fifth of the points go outside the support
        if r.gen_bool(0.2) {
            mu.iter_mut().for_each(|m| *m = -*m - 0.1);
        }
        let engine = heaviside_density(&factors, &mu);
        let quad = quadrature_convolution(&factors, &mu, &cfg);
        match (engine, quad) {
            (Ok(v), Ok(q)) => {
                if v != 0.0 {
                    inside += 1;
                }
                let dev = (v - q.value).abs() / (1.0 + v.abs());
                t.measure(dev, || format!("case {case} (n={n}, d={d}) at {mu:?}: {v} vs {}", q.value));
            }
            (Err(e), _) => t.fail(format!("case {case}: engine failed: {e}")),
            (_, Err(e)) => t.fail(format!("case {case}: quadrature failed: {e}")),
        }
    }
    t.note(format!("{inside} of {FIBER_CASES} points have nonzero density"));
    t.finish()
}
