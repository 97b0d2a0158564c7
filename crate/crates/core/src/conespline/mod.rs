//! Signed sums of translated Heaviside convolutions,
//! `sum_t sign_t * delta_{base_t} * H_{b_1} * ... * H_{b_n}`, optionally
//! multiplied by a polynomial.
//!
//! Densities are evaluated pointwise through fiber-polytope volumes; the
//! Fourier-Laplace transform `∫ e^{i<mu, zeta>} dm(mu)` has the closed form
//! `i^n / prod <b_j, zeta>` per term.

pub mod fiber;
pub mod sampling;

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polycone::{Cone, PolyconeError};
use crate::polynomial::Polynomial;
use crate::rational::{rat_to_f64, RatVec};
pub use fiber::FiberKernel;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SplineError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("Heaviside factor must be nonzero")]
    ZeroFactor,
    #[error("factor cone contains a line")]
    NonProperCone,
    #[error("point lies outside the span of the factors")]
    OutsideSpan,
    #[error("factors do not span the ambient space; the term has no density")]
    SingularTerm,
    #[error("fiber polytope is unbounded")]
    UnboundedFiber,
    #[error("zeta is not regular: <b, zeta> vanishes for factor {index}")]
    NonRegular { index: usize },
    #[error("Im(zeta) is not strictly inside the dual of the factor cone")]
    OutsideConvergenceRegion,
    #[error("terms disagree on the number of factors ({0} vs {1})")]
    MixedFactorCounts(usize, usize),
    #[error("sign must be +1 or -1, got {0}")]
    BadSign(i32),
    #[error("closed-form transform is not available with a polynomial multiplier")]
    PolynomialMultiplier,
    #[error(transparent)]
    Cone(#[from] PolyconeError),
    #[error("invalid JSON: {0}")]
    Json(String),
}

/// Regularity threshold: `|<b, zeta>| > REGULARITY_TOL * |b| * |zeta|`.
pub const REGULARITY_TOL: f64 = 1e-12;

/// One signed translated convolution `sign * delta_base * H_{f_1} * ... * H_{f_n}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TermDoc", into = "TermDoc")]
pub struct ConeSplineTerm {
    sign: i8,
    base: RatVec,
    factors: Vec<RatVec>,
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    sign: i32,
    base: RatVec,
    factors: Vec<RatVec>,
}

impl TryFrom<TermDoc> for ConeSplineTerm {
    type Error = SplineError;
    fn try_from(d: TermDoc) -> Result<Self, SplineError> {
        ConeSplineTerm::new(d.sign, d.base, d.factors)
    }
}

impl From<ConeSplineTerm> for TermDoc {
    fn from(t: ConeSplineTerm) -> Self {
        TermDoc { sign: t.sign as i32, base: t.base, factors: t.factors }
    }
}

impl ConeSplineTerm {
    /// Validates the sign, dimensions, and properness of the factor cone.
    pub fn new(sign: i32, base: RatVec, factors: Vec<RatVec>) -> Result<Self, SplineError> {
        if sign != 1 && sign != -1 {
            return Err(SplineError::BadSign(sign));
        }
        let d = base.dim();
        for f in &factors {
            if f.dim() != d {
                return Err(SplineError::DimensionMismatch { expected: d, found: f.dim() });
            }
            if f.is_zero() {
                return Err(SplineError::ZeroFactor);
            }
        }
        if !factors.is_empty() && !Cone::from_generators(d, factors.clone())?.is_pointed()? {
            return Err(SplineError::NonProperCone);
        }
        Ok(Self { sign: sign as i8, base, factors })
    }

    pub fn sign(&self) -> i32 {
        self.sign as i32
    }

    pub fn base(&self) -> &RatVec {
        &self.base
    }

    pub fn factors(&self) -> &[RatVec] {
        &self.factors
    }

    fn factors_f64(&self) -> Vec<Vec<f64>> {
        self.factors.iter().map(RatVec::to_f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SplineDoc", into = "SplineDoc")]
pub struct SignedConeSpline {
    dim: usize,
    terms: Vec<ConeSplineTerm>,
    poly: Option<Polynomial>,
}

#[derive(Serialize, Deserialize)]
struct SplineDoc {
    dim: usize,
    terms: Vec<ConeSplineTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    poly: Option<Polynomial>,
}

impl TryFrom<SplineDoc> for SignedConeSpline {
    type Error = SplineError;
    fn try_from(d: SplineDoc) -> Result<Self, SplineError> {
        SignedConeSpline::new(d.dim, d.terms, d.poly)
    }
}

impl From<SignedConeSpline> for SplineDoc {
    fn from(s: SignedConeSpline) -> Self {
        SplineDoc { dim: s.dim, terms: s.terms, poly: s.poly }
    }
}

impl SignedConeSpline {
    pub fn new(
        dim: usize,
        terms: Vec<ConeSplineTerm>,
        poly: Option<Polynomial>,
    ) -> Result<Self, SplineError> {
        for t in &terms {
            if t.base.dim() != dim {
                return Err(SplineError::DimensionMismatch { expected: dim, found: t.base.dim() });
            }
        }
        if let Some(first) = terms.first() {
            for t in &terms {
                if t.factors.len() != first.factors.len() {
                    return Err(SplineError::MixedFactorCounts(
                        first.factors.len(),
                        t.factors.len(),
                    ));
                }
            }
        }
        if let Some(p) = &poly {
            if p.dim() != dim {
                return Err(SplineError::DimensionMismatch { expected: dim, found: p.dim() });
            }
        }
        Ok(Self { dim, terms, poly })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[ConeSplineTerm] {
        &self.terms
    }

    pub fn poly(&self) -> Option<&Polynomial> {
        self.poly.as_ref()
    }

    pub fn with_poly(mut self, poly: Polynomial) -> Result<Self, SplineError> {
        if poly.dim() != self.dim {
            return Err(SplineError::DimensionMismatch { expected: self.dim, found: poly.dim() });
        }
        self.poly = Some(poly);
        Ok(self)
    }

    pub fn from_json(s: &str) -> Result<Self, SplineError> {
        serde_json::from_str(s).map_err(|e| SplineError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spline serializes")
    }

    pub fn evaluator(&self) -> Result<SplineEvaluator, SplineError> {
        SplineEvaluator::new(self)
    }
}

/// Density value with an absolute error bound from float accumulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityValue {
    pub value: f64,
    pub abs_error_bound: f64,
}

/// Spline with per-term kernels precomputed; cheap to evaluate repeatedly
/// and shareable across threads.
#[derive(Debug, Clone)]
pub struct SplineEvaluator {
    dim: usize,
    kernels: Vec<FiberKernel>,
    terms: Vec<(f64, Vec<f64>, usize)>,
    poly: Option<Polynomial>,
}

impl SplineEvaluator {
    pub fn new(s: &SignedConeSpline) -> Result<Self, SplineError> {
        let mut kernels: Vec<FiberKernel> = Vec::new();
        let mut index: HashMap<Vec<RatVec>, usize> = HashMap::new();
        let mut terms = Vec::with_capacity(s.terms.len());
        for t in &s.terms {
            let k = match index.get(&t.factors) {
                Some(&k) => k,
                None => {
                    let kernel = FiberKernel::new(s.dim, &t.factors_f64())?;
                    if crate::rational::linalg::rank(&t.factors) < s.dim {
                        return Err(SplineError::SingularTerm);
                    }
                    kernels.push(kernel);
                    index.insert(t.factors.clone(), kernels.len() - 1);
                    kernels.len() - 1
                }
            };
            terms.push((t.sign as f64, t.base.to_f64(), k));
        }
        Ok(Self { dim: s.dim, kernels, terms, poly: s.poly.clone() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn density(&self, mu: &[f64]) -> Result<DensityValue, SplineError> {
        if mu.len() != self.dim {
            return Err(SplineError::DimensionMismatch { expected: self.dim, found: mu.len() });
        }
        let mut value = 0.0;
        let mut err = 0.0;
        let mut shifted = vec![0.0; self.dim];
        for (sign, base, k) in &self.terms {
            for ((s, m), b) in shifted.iter_mut().zip(mu).zip(base) {
                *s = m - b;
            }
            let (v, e) = self.kernels[*k].density(&shifted)?;
            value += sign * v;
            err += e + f64::EPSILON * v.abs();
        }
        if let Some(p) = &self.poly {
            let pv = p.eval(mu);
            value *= pv;
            err *= pv.abs();
        }
        Ok(DensityValue { value, abs_error_bound: err })
    }

    /// Density as a plain function, `NaN` on evaluation errors.
    pub fn density_f64(&self, mu: &[f64]) -> f64 {
        self.density(mu).map(|d| d.value).unwrap_or(f64::NAN)
    }
}

/// Density of `H_{f_1} * ... * H_{f_n}` at `mu`.
pub fn heaviside_density(factors: &[RatVec], mu: &[f64]) -> Result<f64, SplineError> {
    let dim = mu.len();
    let term = ConeSplineTerm::new(1, RatVec::zeros(dim), factors.to_vec())?;
    let kernel = FiberKernel::new(dim, &term.factors_f64())?;
    Ok(kernel.density(mu)?.0)
}

pub fn spline_density(s: &SignedConeSpline, mu: &[f64]) -> Result<DensityValue, SplineError> {
    s.evaluator()?.density(mu)
}

fn pair(v: &[f64], z: &[Complex64]) -> Complex64 {
    v.iter().zip(z).map(|(a, b)| b * *a).sum()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn cnorm(z: &[Complex64]) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// `i^n / prod <f_j, zeta>`. With `strict`, also requires
/// `<f_j, Im zeta> > 0` for every factor.
pub fn laplace_factor(
    factors: &[Vec<f64>],
    zeta: &[Complex64],
    strict: bool,
) -> Result<Complex64, SplineError> {
    let zn = cnorm(zeta);
    let mut denom = Complex64::new(1.0, 0.0);
    for (i, f) in factors.iter().enumerate() {
        if f.len() != zeta.len() {
            return Err(SplineError::DimensionMismatch { expected: zeta.len(), found: f.len() });
        }
        let p = pair(f, zeta);
        if p.norm() <= REGULARITY_TOL * norm(f) * zn {
            return Err(SplineError::NonRegular { index: i });
        }
        if strict && p.im <= 0.0 {
            return Err(SplineError::OutsideConvergenceRegion);
        }
        denom *= p;
    }
    Ok(Complex64::i().powu(factors.len() as u32) / denom)
}

/// Closed-form transform of a spline without polynomial multiplier.
pub fn spline_laplace(
    s: &SignedConeSpline,
    zeta: &[Complex64],
    strict: bool,
) -> Result<Complex64, SplineError> {
    if s.poly.is_some() {
        return Err(SplineError::PolynomialMultiplier);
    }
    if zeta.len() != s.dim {
        return Err(SplineError::DimensionMismatch { expected: s.dim, found: zeta.len() });
    }
    let mut total = Complex64::new(0.0, 0.0);
    for t in &s.terms {
        let base = t.base.to_f64();
        let phase = (Complex64::i() * pair(&base, zeta)).exp();
        let factors = t.factors_f64();
        total += phase * laplace_factor(&factors, zeta, strict)? * t.sign as f64;
    }
    Ok(total)
}

/// Convenience: rational vector to `f64` coordinates.
pub fn to_f64(v: &RatVec) -> Vec<f64> {
    v.iter().map(rat_to_f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, RatVec};
    use approx::assert_relative_eq;

    fn v(xs: &[i64]) -> RatVec {
        RatVec::from_ints(xs)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sphere(lambda: i64) -> SignedConeSpline {
        SignedConeSpline::new(
            1,
            vec![
                ConeSplineTerm::new(1, v(&[-lambda]), vec![v(&[1])]).unwrap(),
                ConeSplineTerm::new(-1, v(&[lambda]), vec![v(&[1])]).unwrap(),
            ],
            None,
        )
        .unwrap()
    }

    #[test]
    fn heaviside_density_examples() {
        assert_relative_eq!(heaviside_density(&[v(&[1, 0]), v(&[0, 1])], &[3.0, 4.0]).unwrap(), 1.0);
        let three = [v(&[1, 0]), v(&[0, 1]), v(&[1, 1])];
        assert_relative_eq!(heaviside_density(&three, &[2.0, 5.0]).unwrap(), 2.0, epsilon = 1e-12);
        assert_relative_eq!(heaviside_density(&[v(&[1]), v(&[1])], &[3.0]).unwrap(), 3.0, epsilon = 1e-12);
    }

    #[test]
    fn non_proper_factor_cone_is_rejected() {
        assert_eq!(
            heaviside_density(&[v(&[1]), v(&[-1])], &[0.5]),
            Err(SplineError::NonProperCone)
        );
        assert_eq!(
            ConeSplineTerm::new(1, v(&[0]), vec![v(&[0])]),
            Err(SplineError::ZeroFactor)
        );
    }

    #[test]
    fn spline_density_examples() {
        let s = sphere(1);
        assert_relative_eq!(spline_density(&s, &[0.0]).unwrap().value, 1.0);
        assert_eq!(spline_density(&s, &[2.0]).unwrap().value, 0.0);

        let single = SignedConeSpline::new(
            1,
            vec![ConeSplineTerm::new(1, v(&[2]), vec![v(&[1])]).unwrap()],
            None,
        )
        .unwrap();
        assert_eq!(spline_density(&single, &[1.0]).unwrap().value, 0.0);
        assert_relative_eq!(spline_density(&single, &[5.0]).unwrap().value, 1.0);

        let with_poly = SignedConeSpline::new(
            1,
            vec![ConeSplineTerm::new(1, v(&[0]), vec![v(&[1])]).unwrap()],
            Some(Polynomial::linear(&v(&[1]))),
        )
        .unwrap();
        assert_relative_eq!(spline_density(&with_poly, &[3.0]).unwrap().value, 3.0);
    }

    #[test]
    fn laplace_factor_examples() {
        let quad = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let l = laplace_factor(&quad, &[c(0.0, 1.0), c(0.0, 1.0)], true).unwrap();
        assert_relative_eq!(l.re, 1.0, epsilon = 1e-15);
        assert_relative_eq!(l.im, 0.0, epsilon = 1e-15);
        let l = laplace_factor(&quad, &[c(0.0, 2.0), c(0.0, 1.0)], true).unwrap();
        assert_relative_eq!(l.re, 0.5, epsilon = 1e-15);

        // ∫_0^∞ e^{i z t} dt = i / z for Im z > 0
        let z = c(0.7, 0.4);
        let l = laplace_factor(&[vec![1.0]], &[z], true).unwrap();
        let expected = Complex64::i() / z;
        assert_relative_eq!((l - expected).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn non_regular_zeta_is_an_error() {
        assert_eq!(
            laplace_factor(&[vec![1.0, -1.0]], &[c(1.0, 1.0), c(1.0, 1.0)], false),
            Err(SplineError::NonRegular { index: 0 })
        );
        assert_eq!(
            laplace_factor(&[vec![1.0]], &[c(1.0, -1.0)], true),
            Err(SplineError::OutsideConvergenceRegion)
        );
    }

    #[test]
    fn spline_laplace_examples() {
        let single = SignedConeSpline::new(
            2,
            vec![ConeSplineTerm::new(1, v(&[0, 0]), vec![v(&[1, 0]), v(&[0, 1])]).unwrap()],
            None,
        )
        .unwrap();
        let z = [c(0.3, 1.0), c(-0.2, 0.5)];
        let got = spline_laplace(&single, &z, true).unwrap();
        let expected = -Complex64::new(1.0, 0.0) / (z[0] * z[1]);
        assert_relative_eq!((got - expected).norm(), 0.0, epsilon = 1e-14);

        // flat density on [-1, 1]: transform 2 sin z / z at real z
        for z in [0.3, 1.7, -2.2] {
            let got = spline_laplace(&sphere(1), &[c(z, 0.0)], false).unwrap();
            assert_relative_eq!(got.re, 2.0 * f64::sin(z) / z, epsilon = 1e-14);
            assert!(got.im.abs() < 1e-14);
        }

        let empty = SignedConeSpline::new(1, vec![], None).unwrap();
        assert_eq!(spline_laplace(&empty, &[c(0.0, 1.0)], true).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let mut s = sphere(3);
        s = s.with_poly(Polynomial::constant(1, rat(2))).unwrap();
        let back = SignedConeSpline::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        let bad = r#"{"dim":1,"terms":[{"sign":1,"base":["0"],"factors":[["1"],["-1"]]}]}"#;
        assert!(SignedConeSpline::from_json(bad).is_err());
    }
}
