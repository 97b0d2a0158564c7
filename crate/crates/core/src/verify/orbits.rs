//! Coadjoint orbits: fixed-point data against coordinate permutations,
//! symmetry and positivity of the K-type measure, and its transform.

use itertools::Itertools;
use rand::Rng;

use super::gen::{complexify, interior_direction, rng};
use super::Tally;
use crate::conespline::to_f64;
use crate::hermitian::{build_pair, k_type_measure, laplace_nu_symbolic, orbit_model, Family, OrbitSpec};
use crate::oracle::{numeric_laplace_spline, LaplaceConfig, LaplaceMode};
use crate::rational::{rat, Rat, RatVec};

const POINTS: usize = 100;
const ZETAS: usize = 10;

/// The orbit in ambient coordinates: diagonal entries for `u(p, q)`, the
/// torus of `U(r)` for `sp(r, R)`.
struct Ambient {
    label: &'static str,
    family: Family,
    params: Vec<usize>,
    lambda: Vec<i64>,
    /// size of the first block; permutations preserve both blocks
    block: usize,
}

impl Ambient {
    fn len(&self) -> usize {
        self.lambda.len()
    }

    /// Ambient vectors to `t*` coordinates.
    fn reduce(&self, v: &[Rat]) -> RatVec {
        match self.family {
            Family::AIII => {
                let last = v[v.len() - 1].clone();
                RatVec(v[..v.len() - 1].iter().map(|x| x - &last).collect())
            }
            Family::CI => RatVec(v.to_vec()),
        }
    }

    fn lift(&self, mu: &[f64]) -> Vec<f64> {
        let mut v = mu.to_vec();
        if self.family == Family::AIII {
            v.push(0.0);
        }
        v
    }

    fn reduce_f64(&self, v: &[f64]) -> Vec<f64> {
        match self.family {
            Family::AIII => v[..v.len() - 1].iter().map(|x| x - v[v.len() - 1]).collect(),
            Family::CI => v.to_vec(),
        }
    }

    /// Positive roots as ambient vectors, compact ones first.
    fn roots(&self) -> Vec<Vec<Rat>> {
        let n = self.len();
        let e = |i: usize| -> Vec<Rat> { (0..n).map(|k| rat(i64::from(k == i))).collect() };
        let add = |a: &[Rat], b: &[Rat], s: i64| -> Vec<Rat> { a.iter().zip(b).map(|(x, y)| x + y * rat(s)).collect() };
        let mut out = Vec::new();
        match self.family {
            Family::AIII => {
                let p = self.block;
                for (lo, hi) in [(0, p), (p, n)] {
                    for (a, b) in (lo..hi).tuple_combinations() {
                        out.push(add(&e(a), &e(b), -1));
                    }
                }
                for a in 0..p {
                    for b in p..n {
                        out.push(add(&e(a), &e(b), -1));
                    }
                }
            }
            Family::CI => {
                for (a, b) in (0..n).tuple_combinations() {
                    out.push(add(&e(a), &e(b), -1));
                }
                for (a, b) in (0..n).tuple_combinations() {
                    out.push(add(&e(a), &e(b), 1));
                }
                for a in 0..n {
                    out.push(add(&e(a), &e(a), 1));
                }
            }
        }
        out
    }

    /// Permutations of the compact Weyl group.
    fn permutations(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let p = match self.family {
            Family::AIII => self.block,
            Family::CI => n,
        };
        let mut out = Vec::new();
        for head in (0..p).permutations(p) {
            for tail in (p..n).permutations(n - p) {
                out.push(head.iter().chain(&tail).copied().collect());
            }
        }
        out
    }
}

fn permute<T: Clone>(sigma: &[usize], v: &[T]) -> Vec<T> {
    // (sigma v)_{sigma(i)} = v_i
    let mut out = v.to_vec();
    for (i, &s) in sigma.iter().enumerate() {
        out[s] = v[i].clone();
    }
    out
}

type PointKey = (RatVec, Vec<RatVec>);

fn expected_points(a: &Ambient) -> Vec<PointKey> {
    let lambda: Vec<Rat> = a.lambda.iter().map(|&x| rat(x)).collect();
    let roots = a.roots();
    let mut out: Vec<PointKey> = a
        .permutations()
        .iter()
        .map(|s| {
            let mut ws: Vec<RatVec> = roots.iter().map(|r| a.reduce(&permute(s, r))).collect();
            ws.sort();
            (a.reduce(&permute(s, &lambda)), ws)
        })
        .collect();
    out.sort();
    out
}

fn orbits() -> Vec<Ambient> {
    vec![
        Ambient { label: "su(1,1)", family: Family::AIII, params: vec![1, 1], lambda: vec![1, -1], block: 1 },
        Ambient { label: "su(2,1)", family: Family::AIII, params: vec![2, 1], lambda: vec![3, 1, -4], block: 2 },
        Ambient { label: "sp(2,R)", family: Family::CI, params: vec![2], lambda: vec![3, 1], block: 2 },
    ]
}

pub fn orbit_suite(seed: u64) -> super::CriterionReport {
    let mut t = Tally::new(8, "orbits", "orbit fixed points, K-type symmetry, positivity, transform", seed, 1.0, 180.0);
    t.note("deviations are in units of their tolerance: 0 for fixed points, 1e-9 for symmetry and sign, 1e-3 for transforms".into());
    let mut r = rng(seed, 8);
    for a in orbits() {
        let label = a.label;
        let lambda = RatVec::from_ints(&a.lambda);
        let spec = match build_pair(a.family, &a.params).and_then(|p| OrbitSpec::new(p, lambda)) {
            Ok(s) => s,
            Err(e) => {
                t.fail(format!("{label}: {e}"));
                continue;
            }
        };

        match orbit_model(&spec) {
            Ok(m) => {
                let mut got: Vec<PointKey> = m
                    .points()
                    .iter()
                    .map(|p| {
                        let mut ws = p.weights.clone();
                        ws.sort();
                        (p.image.clone(), ws)
                    })
                    .collect();
                got.sort();
                let want = expected_points(&a);
                t.check(got == want, || format!("{label}: fixed-point data {got:?} differ from the permutation oracle {want:?}"));
            }
            Err(e) => t.fail(format!("{label}: {e}")),
        }

        let nu = match k_type_measure(&spec) {
            Ok(s) => s,
            Err(e) => {
                t.fail(format!("{label}: {e}"));
                continue;
            }
        };
        let ev = match nu.evaluator() {
            Ok(e) => e,
            Err(e) => {
                t.fail(format!("{label}: {e}"));
                continue;
            }
        };
        let noncompact: Vec<Vec<f64>> = spec.pair.noncompact_roots().iter().map(to_f64).collect();
        let base = to_f64(&spec.lambda);
        let perms = a.permutations();
        let (mut asym, mut negative) = (0.0f64, 0.0f64);
        for _ in 0..POINTS {
            let mut mu = base.clone();
            for root in &noncompact {
                let s: f64 = r.gen_range(0.0..2.0);
                mu.iter_mut().zip(root).for_each(|(m, x)| *m += s * x);
            }
            mu.iter_mut().for_each(|m| *m += r.gen_range(-1.0..1.0));
            let v = ev.density_f64(&mu);
            negative = negative.max(-v);
            let lifted = a.lift(&mu);
            for s in &perms {
                let w_mu = a.reduce_f64(&permute(s, &lifted));
                asym = asym.max((ev.density_f64(&w_mu) - v).abs());
            }
        }
        t.measure_against(asym, 1e-9, || format!("{label}: nu(w mu) - nu(mu) reaches {asym:.3e}"));
        t.measure_against(negative.max(0.0), 1e-9, || format!("{label}: nu reaches {:.3e}", -negative));

        let center = to_f64(&spec.pair.center_vector);
        let cfg = LaplaceConfig { mode: LaplaceMode::Cells };
        for _ in 0..ZETAS {
            let Some(y) = interior_direction(&mut r, &noncompact, &center) else {
                t.fail(format!("{label}: no interior direction"));
                continue;
            };
            let zeta = complexify(&mut r, &y);
            match (laplace_nu_symbolic(&spec, &zeta, true), numeric_laplace_spline(&nu, &zeta, &cfg)) {
                (Ok(s), Ok(n)) => {
                    let dev = (s - n.value).norm() / s.norm();
                    t.measure_against(dev, 1e-3, || format!("{label} at {zeta:?}: symbolic {s} vs numeric {}", n.value));
                }
                (Err(e), _) => t.fail(format!("{label}: symbolic transform failed: {e}")),
                (_, Err(e)) => t.fail(format!("{label}: numeric transform failed: {e}")),
            }
        }
    }
    t.finish()
}
