//! Model-manifold calibration, lattice counts, and the truncated disc.

use num_complex::Complex64;

use super::Tally;
use crate::conespline::sampling::GridAxis;
use crate::conespline::{ConeSplineTerm, SignedConeSpline, SplineEvaluator};
use crate::localize::{localization_sum, FixedPointDatum, FixedPointModel};
use crate::oracle::{calibrate, lattice_count, montecarlo_pushforward, truncated_circle_check, LatticeCountConfig, MonteCarloConfig};
use crate::rational::RatVec;

fn unit_density(weights: &[RatVec]) -> SplineEvaluator {
    let d = weights[0].dim();
    let term = ConeSplineTerm::new(1, RatVec::zeros(d), weights.to_vec()).expect("valid term");
    SignedConeSpline::new(d, vec![term], None).and_then(|s| s.evaluator()).expect("pointed cone")
}

fn axis(s: &str) -> GridAxis {
    s.parse().expect("static grid axis")
}

pub const MONTECARLO_SAMPLES: u64 = 1_000_000;

pub fn montecarlo_suite(seed: u64) -> super::CriterionReport {
    let mut t = Tally::new(6, "montecarlo", "Monte-Carlo pushforward calibration", seed, 1.0, 300.0);
    t.note("deviations are in units of their tolerance: 3 sigma per bin, 2% between constants".into());
    let cases: [(&str, Vec<RatVec>, Vec<GridAxis>); 3] = [
        ("n=1 d=1", vec![RatVec::from_ints(&[1])], vec![axis("0:2:8")]),
        ("n=2 d=1", vec![RatVec::from_ints(&[1]), RatVec::from_ints(&[1])], vec![axis("0:2:8")]),
        ("n=2 d=2", vec![RatVec::from_ints(&[1, 0]), RatVec::from_ints(&[0, 1])], vec![axis("0:2:4"), axis("0:2:4")]),
    ];
    let cfg = MonteCarloConfig { seed, samples: MONTECARLO_SAMPLES, cutoff_radius: 2.0 };
    let mut constants = Vec::new();
    for (label, weights, bins) in cases {
        let phi0 = vec![0.0; weights[0].dim()];
        let table = match montecarlo_pushforward(&weights, &phi0, &bins, &cfg) {
            Ok(v) => v,
            Err(e) => {
                t.fail(format!("{label}: {e}"));
                continue;
            }
        };
        match calibrate(&table, &unit_density(&weights)) {
            Ok(c) => {
                t.measure_against(c.max_deviation_sigma, 3.0, || {
                    format!("{label}: bin ratio off the mean by {:.2} sigma", c.max_deviation_sigma)
                });
                t.note(format!(
                    "{label}: ratio {:.5} +- {:.5} over {} bins, per complex dimension {:.5}, max {:.2} sigma",
                    c.ratio, c.ratio_std_error, c.bins_used, c.per_dimension, c.max_deviation_sigma
                ));
                constants.push(c.per_dimension);
            }
            Err(e) => t.fail(format!("{label}: {e}")),
        }
    }
    if constants.len() == 3 {
        let hi = constants.iter().copied().fold(f64::MIN, f64::max);
        let lo = constants.iter().copied().fold(f64::MAX, f64::min);
        t.measure_against(hi / lo - 1.0, 0.02, || format!("per-dimension constants {constants:?} disagree"));
        let mean = constants.iter().sum::<f64>() / 3.0;
        t.note(format!("global constant per complex dimension {mean:.5} (2 pi = {:.5})", std::f64::consts::TAU));
    }
    t.finish()
}

pub const LATTICE_SCALE: u64 = 100;

pub fn lattice_suite(seed: u64) -> super::CriterionReport {
    let mut t = Tally::new(9, "lattice", "lattice counts vs scaled density", seed, 0.05, 60.0);
    let systems: [(&str, Vec<Vec<i64>>, Vec<Vec<i64>>); 2] = [
        ("{1, 1}", vec![vec![1], vec![1]], vec![vec![1], vec![2], vec![3]]),
        (
            "{e1, e2, e1+e2}",
            vec![vec![1, 0], vec![0, 1], vec![1, 1]],
            vec![vec![2, 1], vec![1, 2], vec![3, 2], vec![2, 3], vec![3, 1]],
        ),
    ];
    let tf = LATTICE_SCALE as f64;
    for (label, weights, targets) in systems {
        let rw: Vec<RatVec> = weights.iter().map(|w| RatVec::from_ints(w)).collect();
        let ev = unit_density(&rw);
        let excess = (weights.len() - weights[0].len()) as i32;
        let mut quotients = Vec::new();
        for mu in &targets {
            let cfg = LatticeCountConfig::new(LATTICE_SCALE, mu.clone());
            let f = ev.density_f64(&mu.iter().map(|&x| x as f64).collect::<Vec<_>>());
            match lattice_count(&weights, &cfg) {
                Ok(n) => quotients.push((mu.clone(), n as f64 / tf.powi(excess) / f)),
                Err(e) => t.fail(format!("{label} at {mu:?}: {e}")),
            }
        }
        if quotients.is_empty() {
            continue;
        }
        let c = quotients.iter().map(|q| q.1).sum::<f64>() / quotients.len() as f64;
        for (mu, q) in &quotients {
            t.measure((q - c).abs(), || format!("{label} at {mu:?}: N / (t^(n-d) f) = {q:.4}, c = {c:.4}"));
        }
        t.note(format!("{label}: c = {c:.5} at t = {LATTICE_SCALE}"));
    }
    t.finish()
}

pub fn circle_suite(seed: u64) -> super::CriterionReport {
    let mut t = Tally::new(10, "circle", "truncated disc integral vs fixed point and boundary terms", seed, 1.0, 30.0);
    t.note("deviations are in units of their tolerance: 1e-8 for the identity, 1e-6 for decay and the limit".into());
    let samples = [
        (1, Complex64::new(0.0, 0.5), 1.0),
        (2, Complex64::new(0.3, 0.5), 2.5),
        (3, Complex64::new(-1.0, 0.8), 0.7),
        (1, Complex64::new(2.0, 1.0), 4.0),
        (2, Complex64::new(0.7, 1.5), 3.0),
    ];
    let mut choices = Vec::new();
    for (alpha, z, a) in samples {
        match truncated_circle_check(alpha, z, a) {
            Ok(rep) => {
                t.measure_against(rep.difference, 1e-8, || format!("alpha {alpha}, z {z}, a {a}"));
                choices.push((rep.sign, rep.normalization_label));
            }
            Err(e) => t.fail(format!("alpha {alpha}, z {z}, a {a}: {e}")),
        }
    }
    choices.dedup();
    t.check(choices.len() == 1, || format!("sign/normalization choice differs between samples: {choices:?}"));
    if let Some((sign, label)) = choices.first() {
        t.note(format!("boundary sign {:+}, Liouville normalization {label}", sign));
    }

    // boundary decay and the a -> infinity limit against the fixed-point sum
    for (alpha, z) in [(1, Complex64::new(0.3, 0.5)), (2, Complex64::new(-0.4, 0.6))] {
        let a = 60.0;
        let rep = match truncated_circle_check(alpha, z, a) {
            Ok(r) => r,
            Err(e) => {
                t.fail(format!("alpha {alpha}, z {z}, a {a}: {e}"));
                continue;
            }
        };
        let c = |d: &crate::oracle::ComplexDoc| Complex64::new(d.0[0], d.0[1]);
        let decay = c(&rep.boundary_term).norm() / c(&rep.fixed_point_term).norm();
        t.measure_against(decay, 1e-6, || format!("boundary term at a = {a} is {decay:.3e} of the fixed-point term"));
        let m = FixedPointModel::new(
            1,
            1,
            vec![FixedPointDatum { image: RatVec::zeros(1), weights: vec![RatVec::from_ints(&[alpha])] }],
            None,
        )
        .expect("one-point model");
        match localization_sum(&m, &[z], None) {
            Ok(v) => {
                let dev = (c(&rep.lhs) - v).norm() / v.norm();
                t.measure_against(dev, 1e-6, || format!("limit at a = {a} vs localization sum {v}"));
            }
            Err(e) => t.fail(format!("localization failed: {e}")),
        }
    }
    t.finish()
}
