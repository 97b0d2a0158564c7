//! `f_k(mu) = ∫_0^T f_{k-1}(mu - t b_k) dt`, bottoming out at the
//! indicator of a simplicial cone.

use gauss_quad::GaussLegendre;
use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::polycone::{dual_cone, interior_point, Cone};
use crate::rational::{linalg, RatVec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-10, max_depth: 30 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), OracleError> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(OracleError::InvalidConfig("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureValue {
    pub value: f64,
    pub error: f64,
}

struct Plan {
    dim: usize,
    factors: Vec<Vec<f64>>,
    /// inverse of the first `dim` factors as columns
    base_inv: DMatrix<f64>,
    base_det: f64,
    eta: Vec<f64>,
    /// wall normals of the arrangement spanned by the first `k` factors
    walls: Vec<Vec<Vec<f64>>>,
    low: GaussLegendre,
    high: GaussLegendre,
    cfg: QuadratureConfig,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn quadrature_convolution(
    factors: &[RatVec],
    mu: &[f64],
    cfg: &QuadratureConfig,
) -> Result<QuadratureValue, OracleError> {
    cfg.validate()?;
    let d = mu.len();
    for f in factors {
        if f.dim() != d {
            return Err(OracleError::DimensionMismatch { expected: d, found: f.dim() });
        }
        if f.is_zero() {
            return Err(OracleError::NonProper);
        }
    }
    if d == 0 {
        return Ok(QuadratureValue { value: 1.0, error: 0.0 });
    }
    if linalg::rank(factors) < d {
        return Err(OracleError::Singular);
    }
    let cone = Cone::from_generators(d, factors.to_vec())?;
    if !cone.is_pointed()? {
        return Err(OracleError::NonProper);
    }
    let eta = interior_point(&dual_cone(&cone)?)?.to_f64();

    // independent factors first so the innermost level is a simplicial cone
    let mut order: Vec<usize> = Vec::new();
    for i in 0..factors.len() {
        let mut trial: Vec<RatVec> = order.iter().map(|&j| factors[j].clone()).collect();
        trial.push(factors[i].clone());
        if order.len() < d && linalg::rank(&trial) == trial.len() {
            order.push(i);
        }
    }
    let rest: Vec<usize> = (0..factors.len()).filter(|i| !order.contains(i)).collect();
    order.extend(rest);
    let exact: Vec<RatVec> = order.iter().map(|&i| factors[i].clone()).collect();

    let base = DMatrix::from_fn(d, d, |r, c| crate::rational::rat_to_f64(&exact[c][r]));
    let base_det = base.determinant();
    let base_inv = base.try_inverse().ok_or(OracleError::Singular)?;

    let mut walls = vec![Vec::new(); exact.len() + 1];
    for (k, slot) in walls.iter_mut().enumerate().skip(d) {
        let mut normals: Vec<RatVec> = Vec::new();
        for subset in (0..k).combinations(d - 1) {
            let rows: Vec<RatVec> = subset.iter().map(|&i| exact[i].clone()).collect();
            let ker = linalg::kernel(&rows, d);
            if ker.len() == 1 {
                let n = ker[0].primitive();
                if !normals.contains(&n) {
                    normals.push(n);
                }
            }
        }
        *slot = normals.iter().map(RatVec::to_f64).collect();
    }

    let plan = Plan {
        dim: d,
        factors: exact.iter().map(RatVec::to_f64).collect(),
        base_inv,
        base_det: base_det.abs(),
        eta,
        walls,
        low: GaussLegendre::new(4).expect("valid degree"),
        high: GaussLegendre::new(5).expect("valid degree"),
        cfg: *cfg,
    };
    let (value, error) = plan.eval(plan.factors.len(), mu)?;
    Ok(QuadratureValue { value, error })
}

impl Plan {
    fn eval(&self, k: usize, mu: &[f64]) -> Result<(f64, f64), OracleError> {
        if k == self.dim {
            let s = &self.base_inv * DVector::from_column_slice(mu);
            let inside = s.iter().all(|&x| x >= 0.0);
            return Ok((if inside { 1.0 / self.base_det } else { 0.0 }, 0.0));
        }
        let beta = &self.factors[k - 1];
        let top = dot(&self.eta, mu) / dot(&self.eta, beta);
        if top <= 0.0 {
            return Ok((0.0, 0.0));
        }
        let mut cuts = vec![0.0, top];
        for n in &self.walls[k - 1] {
            let den = dot(n, beta);
            if den.abs() > 1e-300 {
                let t = dot(n, mu) / den;
                if t > 0.0 && t < top {
                    cuts.push(t);
                }
            }
        }
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * top);
        let mut value = 0.0;
        let mut error = 0.0;
        for w in cuts.windows(2) {
            let (v, e) = self.adaptive(k, mu, w[0], w[1], 0)?;
            value += v;
            error += e;
        }
        Ok((value, error))
    }

    fn piece(&self, rule: &GaussLegendre, k: usize, mu: &[f64], a: f64, b: f64) -> (f64, f64) {
        let beta = &self.factors[k - 1];
        let mut inner_err: f64 = 0.0;
        let mut failed = false;
        let v = rule.integrate(a, b, |t| {
            let shifted: Vec<f64> = mu.iter().zip(beta).map(|(m, x)| m - t * x).collect();
            match self.eval(k - 1, &shifted) {
                Ok((v, e)) => {
                    inner_err = inner_err.max(e);
                    v
                }
                Err(_) => {
                    failed = true;
                    0.0
                }
            }
        });
        let e = if failed { f64::INFINITY } else { inner_err * (b - a) };
        (v, e)
    }

    fn adaptive(
        &self,
        k: usize,
        mu: &[f64],
        a: f64,
        b: f64,
        depth: u32,
    ) -> Result<(f64, f64), OracleError> {
        let (lo, _) = self.piece(&self.low, k, mu, a, b);
        let (hi, inner) = self.piece(&self.high, k, mu, a, b);
        let est = (hi - lo).abs();
        let tol = self.cfg.abs_tol.max(self.cfg.rel_tol * hi.abs());
        if est + inner <= tol {
            return Ok((hi, est + inner));
        }
        if depth >= self.cfg.max_depth {
            return Err(OracleError::DepthExceeded(self.cfg.max_depth));
        }
        let m = 0.5 * (a + b);
        let (v1, e1) = self.adaptive(k, mu, a, m, depth + 1)?;
        let (v2, e2) = self.adaptive(k, mu, m, b, depth + 1)?;
        Ok((v1 + v2, e1 + e2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(xs: &[i64]) -> RatVec {
        RatVec::from_ints(xs)
    }

    fn q(factors: &[RatVec], mu: &[f64]) -> f64 {
        quadrature_convolution(factors, mu, &QuadratureConfig::default()).unwrap().value
    }

    #[test]
    fn examples() {
        assert_relative_eq!(q(&[v(&[1])], &[7.0]), 1.0);
        assert_relative_eq!(q(&[v(&[1]), v(&[1])], &[3.0]), 3.0, epsilon = 1e-10);
        let three = [v(&[1, 0]), v(&[0, 1]), v(&[1, 1])];
        assert_relative_eq!(q(&three, &[2.0, 5.0]), 2.0, epsilon = 1e-10);
        assert_relative_eq!(q(&three, &[4.0, 1.5]), 1.5, epsilon = 1e-10);
        assert_eq!(q(&three, &[-1.0, 1.0]), 0.0);
    }

    #[test]
    fn three_equal_factors_give_half_square() {
        let f = [v(&[2]), v(&[2]), v(&[2])];
        // (1/2)^3 * mu^2 / 2
        assert_relative_eq!(q(&f, &[3.0]), 9.0 / 16.0, epsilon = 1e-10);
    }

    #[test]
    fn errors() {
        let cfg = QuadratureConfig::default();
        assert_eq!(
            quadrature_convolution(&[v(&[1]), v(&[-1])], &[0.5], &cfg),
            Err(OracleError::NonProper)
        );
        assert_eq!(
            quadrature_convolution(&[v(&[1, 0])], &[0.5, 0.0], &cfg),
            Err(OracleError::Singular)
        );
        let bad = QuadratureConfig { abs_tol: 0.0, ..cfg };
        assert!(quadrature_convolution(&[v(&[1])], &[1.0], &bad).is_err());
    }
}
