//! Numeric `∫ e^{i<mu, zeta>} f(mu) dmu` from point evaluations of `f`.
//!
//! Two modes:
//! - `Box`: tensor Gauss-Legendre over a box cut at given breakpoints, for
//!   compactly supported densities (or with a reported exponential tail).
//! - cells: for a density that is `sum_t sign_t g_t(mu - a_t)` with each
//!   `g_t` polynomial on the chambers of the wall arrangement of its factor
//!   cone. Each chamber is split into simplicial cones, the polynomial is
//!   recovered by interpolation at interior points and integrated against
//!   the exponential exactly.

use gauss_quad::GaussLegendre;
use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::conespline::{ConeSplineTerm, SignedConeSpline, SplineEvaluator};
use crate::rational::{linalg, RatVec};

pub type Density<'a> = dyn Fn(&[f64]) -> f64 + Sync + 'a;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LaplaceMode {
    /// Sorted breakpoints per axis; the first and last are the box ends.
    Box {
        breaks: Vec<Vec<f64>>,
        order: usize,
        /// exponential decay rate of the integrand outside the box, if any
        decay: Option<f64>,
    },
    /// Simplicial-cone interpolatory cubature; needs spline structure.
    Cells,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaplaceConfig {
    pub mode: LaplaceMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaplaceValue {
    pub value: Complex64,
    /// discretization or interpolation error estimate
    pub error_bound: f64,
    /// bound on the neglected tail outside the integration region
    pub tail_bound: f64,
}

/// Relative size below which an exponential rate counts as non-decaying.
const DECAY_TOL: f64 = 1e-12;
/// Relative tolerance for wall sign tests.
const SIGN_TOL: f64 = 1e-9;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cdot(a: &[f64], z: &[Complex64]) -> Complex64 {
    a.iter().zip(z).map(|(x, w)| w * *x).sum()
}

fn normalized(v: &[f64]) -> Vec<f64> {
    let n = dot(v, v).sqrt();
    v.iter().map(|x| x / n).collect()
}

/// Box-mode transform of an arbitrary density.
pub fn numeric_laplace(
    f: &Density<'_>,
    zeta: &[Complex64],
    breaks: &[Vec<f64>],
    order: usize,
    decay: Option<f64>,
) -> Result<LaplaceValue, OracleError> {
    let d = zeta.len();
    if breaks.len() != d {
        return Err(OracleError::DimensionMismatch { expected: d, found: breaks.len() });
    }
    if order == 0 || breaks.iter().any(|b| b.len() < 2 || b.windows(2).any(|w| w[1] <= w[0])) {
        return Err(OracleError::InvalidConfig("box needs increasing breakpoints".into()));
    }
    let fine = box_rule(f, zeta, breaks, order + 2)?;
    let coarse = box_rule(f, zeta, breaks, order)?;
    let tail_bound = match decay {
        None => 0.0,
        Some(delta) => {
            if delta <= 0.0 {
                return Err(OracleError::NonDecaying);
            }
            let r = breaks
                .iter()
                .map(|b| b[0].abs().min(b[b.len() - 1].abs()))
                .fold(f64::INFINITY, f64::min);
            (-delta * r).exp()
        }
    };
    Ok(LaplaceValue { value: fine, error_bound: (fine - coarse).norm(), tail_bound })
}

fn box_rule(
    f: &Density<'_>,
    zeta: &[Complex64],
    breaks: &[Vec<f64>],
    order: usize,
) -> Result<Complex64, OracleError> {
    let rule = GaussLegendre::new(order.max(2))
        .map_err(|e| OracleError::InvalidConfig(e.to_string()))?;
    let nodes: Vec<(f64, f64)> = rule.iter().map(|(x, w)| (*x, *w)).collect();
    // 1-D nodes and weights per axis
    let axes: Vec<Vec<(f64, f64)>> = breaks
        .iter()
        .map(|b| {
            b.windows(2)
                .flat_map(|w| {
                    let (mid, half) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
                    nodes.iter().map(move |(x, wt)| (mid + half * x, half * wt))
                })
                .collect()
        })
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for point in axes.iter().map(|a| a.iter()).multi_cartesian_product() {
        let x: Vec<f64> = point.iter().map(|p| p.0).collect();
        let w: f64 = point.iter().map(|p| p.1).product();
        let v = f(&x);
        if v != 0.0 {
            total += (Complex64::i() * cdot(&x, zeta)).exp() * (w * v);
        }
    }
    Ok(total)
}

/// One translated piece `sign * g(mu - apex)`; `g` is evaluated through
/// `density` at absolute coordinates.
pub struct ConePiece<'a> {
    pub sign: f64,
    pub apex: Vec<f64>,
    pub factors: Vec<Vec<f64>>,
    /// polynomial degree of `g` on each chamber
    pub degree: usize,
    pub density: &'a Density<'a>,
}

/// Cell-mode transform of a sum of cone pieces.
pub fn numeric_laplace_cells(
    pieces: &[ConePiece<'_>],
    zeta: &[Complex64],
) -> Result<LaplaceValue, OracleError> {
    let mut value = Complex64::new(0.0, 0.0);
    let mut error_bound = 0.0;
    for p in pieces {
        if p.apex.len() != zeta.len() {
            return Err(OracleError::DimensionMismatch {
                expected: zeta.len(),
                found: p.apex.len(),
            });
        }
        let mut piece_sum = Complex64::new(0.0, 0.0);
        for cone in simplicial_chambers(&p.factors, zeta.len())? {
            let (v, e) = integrate_simplicial(p, &cone, zeta)?;
            piece_sum += v;
            error_bound += e;
        }
        value += piece_sum * (Complex64::i() * cdot(&p.apex, zeta)).exp() * p.sign;
    }
    Ok(LaplaceValue { value, error_bound, tail_bound: 0.0 })
}

/// Transform of a spline through pointwise density evaluation.
pub fn numeric_laplace_spline(
    s: &SignedConeSpline,
    zeta: &[Complex64],
    cfg: &LaplaceConfig,
) -> Result<LaplaceValue, OracleError> {
    if zeta.len() != s.dim() {
        return Err(OracleError::DimensionMismatch { expected: s.dim(), found: zeta.len() });
    }
    match &cfg.mode {
        LaplaceMode::Box { breaks, order, decay } => {
            let ev = s.evaluator()?;
            let f = |x: &[f64]| ev.density_f64(x);
            numeric_laplace(&f, zeta, breaks, *order, *decay)
        }
        LaplaceMode::Cells => {
            let poly_degree = s.poly().map_or(0, |p| p.degree() as usize);
            let evaluators: Vec<SplineEvaluator> = s
                .terms()
                .iter()
                .map(|t| {
                    let single = ConeSplineTerm::new(1, t.base().clone(), t.factors().to_vec())?;
                    SignedConeSpline::new(s.dim(), vec![single], s.poly().cloned())?.evaluator()
                })
                .collect::<Result<_, _>>()?;
            let closures: Vec<Box<Density<'_>>> = evaluators
                .iter()
                .map(|ev| Box::new(move |x: &[f64]| ev.density_f64(x)) as Box<Density<'_>>)
                .collect();
            let pieces: Vec<ConePiece<'_>> = s
                .terms()
                .iter()
                .zip(&closures)
                .map(|(t, f)| ConePiece {
                    sign: t.sign() as f64,
                    apex: t.base().to_f64(),
                    factors: t.factors().iter().map(RatVec::to_f64).collect(),
                    degree: t.factors().len() - s.dim() + poly_degree,
                    density: f.as_ref(),
                })
                .collect();
            numeric_laplace_cells(&pieces, zeta)
        }
    }
}

/// Simplicial cones (as ray lists) subdividing the chambers of the wall
/// arrangement inside `cone(factors)`.
pub fn simplicial_chambers(factors: &[Vec<f64>], d: usize) -> Result<Vec<Vec<Vec<f64>>>, OracleError> {
    if d == 0 || d > 3 {
        return Err(OracleError::InvalidConfig(format!("cell mode supports 1 <= d <= 3, got {d}")));
    }
    let exact: Vec<RatVec> = factors
        .iter()
        .map(|f| {
            RatVec(
                f.iter()
                    .map(|x| crate::rational::rat_from_f64(*x).expect("finite factor"))
                    .collect(),
            )
        })
        .collect();
    if linalg::rank(&exact) < d {
        return Err(OracleError::Singular);
    }
    let mut walls: Vec<RatVec> = Vec::new();
    for subset in (0..exact.len()).combinations(d - 1) {
        let rows: Vec<RatVec> = subset.iter().map(|&i| exact[i].clone()).collect();
        let ker = linalg::kernel(&rows, d);
        if ker.len() == 1 {
            let n = ker[0].primitive();
            if !walls.contains(&n) {
                walls.push(n);
            }
        }
    }
    let facets = crate::polycone::Cone::from_generators(d, exact.clone())?.halfspace_normals()?;
    let facets: Vec<Vec<f64>> = facets.iter().map(|n| normalized(&n.to_f64())).collect();
    let walls_f: Vec<Vec<f64>> = walls.iter().map(|n| normalized(&n.to_f64())).collect();

    // candidate rays: intersections of d - 1 walls inside the cone
    let mut rays: Vec<Vec<f64>> = Vec::new();
    for subset in (0..walls.len()).combinations(d - 1) {
        let rows: Vec<RatVec> = subset.iter().map(|&i| walls[i].clone()).collect();
        let ker = linalg::kernel(&rows, d);
        if ker.len() != 1 {
            continue;
        }
        for sgn in [1.0, -1.0] {
            let r: Vec<f64> = normalized(&ker[0].to_f64()).iter().map(|x| x * sgn).collect();
            if facets.iter().all(|n| dot(n, &r) >= -SIGN_TOL)
                && !rays.iter().any(|q| dot(q, &r) > 1.0 - 1e-12)
            {
                rays.push(r);
            }
        }
    }

    let sign_of = |x: &[f64]| -> Vec<i8> {
        walls_f
            .iter()
            .map(|n| {
                let s = dot(n, x);
                if s > SIGN_TOL {
                    1
                } else if s < -SIGN_TOL {
                    -1
                } else {
                    0
                }
            })
            .collect()
    };
    let ray_signs: Vec<Vec<i8>> = rays.iter().map(|r| sign_of(r)).collect();

    let mut chambers: Vec<Vec<i8>> = Vec::new();
    for subset in (0..rays.len()).combinations(d) {
        let m = DMatrix::from_fn(d, d, |i, j| rays[subset[j]][i]);
        if m.determinant().abs() < 1e-9 {
            continue;
        }
        let centroid: Vec<f64> =
            (0..d).map(|i| subset.iter().map(|&j| rays[j][i]).sum::<f64>() / d as f64).collect();
        let s = sign_of(&centroid);
        if s.iter().all(|&x| x != 0) && !chambers.contains(&s) {
            chambers.push(s);
        }
    }

    let mut out = Vec::new();
    for ch in &chambers {
        let members: Vec<Vec<f64>> = rays
            .iter()
            .zip(&ray_signs)
            .filter(|(_, rs)| rs.iter().zip(ch).all(|(a, b)| *a == 0 || a == b))
            .map(|(r, _)| r.clone())
            .collect();
        out.extend(fan(&members, d));
    }
    Ok(out)
}

/// Fan triangulation of a pointed cone over a convex cross-section.
fn fan(rays: &[Vec<f64>], d: usize) -> Vec<Vec<Vec<f64>>> {
    if rays.len() == d {
        return vec![rays.to_vec()];
    }
    // only d = 3 has non-simplicial chambers
    let c = normalized(
        &(0..d).map(|i| rays.iter().map(|r| r[i]).sum::<f64>()).collect::<Vec<_>>(),
    );
    let mut u: Vec<f64> = rays[0].iter().zip(&c).map(|(r, ci)| r - dot(&rays[0], &c) * ci).collect();
    u = normalized(&u);
    let w = vec![c[1] * u[2] - c[2] * u[1], c[2] * u[0] - c[0] * u[2], c[0] * u[1] - c[1] * u[0]];
    let mut sorted: Vec<(f64, &Vec<f64>)> =
        rays.iter().map(|r| (dot(r, &w).atan2(dot(r, &u)), r)).collect();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    (1..sorted.len() - 1)
        .map(|i| vec![sorted[0].1.clone(), sorted[i].1.clone(), sorted[i + 1].1.clone()])
        .collect()
}

fn monomials(d: usize, degree: usize) -> Vec<Vec<usize>> {
    (0..d)
        .map(|_| 0..=degree)
        .multi_cartesian_product()
        .filter(|e| e.iter().sum::<usize>() <= degree)
        .collect()
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

fn integrate_simplicial(
    p: &ConePiece<'_>,
    rays: &[Vec<f64>],
    zeta: &[Complex64],
) -> Result<(Complex64, f64), OracleError> {
    let d = rays.len();
    let jac = DMatrix::from_fn(d, d, |i, j| rays[j][i]).determinant().abs();
    let zn = zeta.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let rates: Vec<Complex64> = rays.iter().map(|r| -Complex64::i() * cdot(r, zeta)).collect();
    let at = |y: &[f64]| -> f64 {
        let x: Vec<f64> = (0..d)
            .map(|i| p.apex[i] + rays.iter().zip(y).map(|(r, yj)| r[i] * yj).sum::<f64>())
            .collect();
        (p.density)(&x)
    };

    let mons = monomials(d, p.degree);
    let scale = (p.degree + 1) as f64;
    let offsets: Vec<f64> = (0..d).map(|j| 0.31 + 0.17 * j as f64).collect();
    let nodes: Vec<Vec<f64>> = mons
        .iter()
        .map(|k| k.iter().zip(&offsets).map(|(&kj, o)| (kj as f64 + o) / scale).collect())
        .collect();
    let vander = |y: &[f64]| -> Vec<f64> {
        mons.iter()
            .map(|e| e.iter().zip(y).map(|(&k, yj)| yj.powi(k as i32)).product())
            .collect()
    };
    let m = mons.len();
    let a = DMatrix::from_fn(m, m, |i, j| vander(&nodes[i])[j]);
    let b = DVector::from_iterator(m, nodes.iter().map(|y| at(y)));
    let coeffs = a
        .lu()
        .solve(&b)
        .ok_or_else(|| OracleError::InvalidConfig("singular interpolation system".into()))?;

    let mut residual: f64 = 0.0;
    let mut magnitude: f64 = b.amax();
    for j in 0..=d {
        let y: Vec<f64> = (0..d).map(|i| 0.55 + if i == j { 0.9 } else { 0.0 }).collect();
        let fit: f64 = vander(&y).iter().zip(coeffs.iter()).map(|(v, c)| v * c).sum();
        let actual = at(&y);
        magnitude = magnitude.max(actual.abs());
        residual = residual.max((fit - actual).abs());
    }
    if coeffs.iter().all(|c| *c == 0.0) {
        return Ok((Complex64::new(0.0, 0.0), residual));
    }
    for r in &rates {
        if r.re <= DECAY_TOL * zn {
            return Err(OracleError::NonDecaying);
        }
    }

    let mut value = Complex64::new(0.0, 0.0);
    for (e, c) in mons.iter().zip(coeffs.iter()) {
        if *c == 0.0 {
            continue;
        }
        let mut term = Complex64::new(*c, 0.0);
        for (&k, rate) in e.iter().zip(&rates) {
            term *= factorial(k) / rate.powu(k as u32 + 1);
        }
        value += term;
    }
    let damp: f64 = rates.iter().map(|r| 1.0 / r.re).product();
    let error = (residual + 1e-13 * magnitude) * damp * jac;
    Ok((value * jac, error))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn half_line_indicator() {
        let f = |x: &[f64]| if x[0] >= 0.0 { 1.0 } else { 0.0 };
        let piece = ConePiece {
            sign: 1.0,
            apex: vec![0.0],
            factors: vec![vec![1.0]],
            degree: 0,
            density: &f,
        };
        let v = numeric_laplace_cells(&[piece], &[c(0.0, 1.0)]).unwrap();
        assert_relative_eq!(v.value.re, 1.0, epsilon = 1e-12);
        assert!(v.value.im.abs() < 1e-12);
    }

    #[test]
    fn flat_interval_in_box_mode() {
        let f = |x: &[f64]| if x[0].abs() <= 1.0 { 1.0 } else { 0.0 };
        let breaks = vec![vec![-2.0, -1.0, 0.0, 1.0, 2.0]];
        for z in [0.4, 2.5] {
            let v = numeric_laplace(&f, &[c(z, 0.0)], &breaks, 12, None).unwrap();
            assert_relative_eq!(v.value.re, 2.0 * f64::sin(z) / z, epsilon = 1e-12);
        }
        let zero = |_: &[f64]| 0.0;
        let v = numeric_laplace(&zero, &[c(1.0, 0.0)], &breaks, 4, None).unwrap();
        assert_eq!(v.value, c(0.0, 0.0));
    }

    #[test]
    fn chambers_of_three_factors() {
        let f = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        assert_eq!(simplicial_chambers(&f, 2).unwrap().len(), 2);
        let g = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0],
        ];
        // the planes x=y, y=z, x=z cut the octant into six chambers
        assert_eq!(simplicial_chambers(&g, 3).unwrap().len(), 6);
    }

    #[test]
    fn spline_cells_match_closed_form() {
        let v = |xs: &[i64]| RatVec::from_ints(xs);
        let term = ConeSplineTerm::new(
            1,
            v(&[1, -1]),
            vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1]), v(&[1, 2])],
        )
        .unwrap();
        let s = SignedConeSpline::new(2, vec![term], None).unwrap();
        let zeta = [c(0.3, 1.1), c(-0.4, 0.7)];
        let num = numeric_laplace_spline(&s, &zeta, &LaplaceConfig { mode: LaplaceMode::Cells })
            .unwrap();
        let exact = crate::conespline::spline_laplace(&s, &zeta, true).unwrap();
        assert!((num.value - exact).norm() < 1e-8 * exact.norm(), "{num:?} vs {exact}");
    }

    #[test]
    fn dual_boundary_is_non_decaying() {
        let f = |x: &[f64]| if x[0] >= 0.0 { 1.0 } else { 0.0 };
        let piece = ConePiece {
            sign: 1.0,
            apex: vec![0.0],
            factors: vec![vec![1.0]],
            degree: 0,
            density: &f,
        };
        assert_eq!(
            numeric_laplace_cells(&[piece], &[c(1.0, 0.0)]),
            Err(OracleError::NonDecaying)
        );
    }
}
