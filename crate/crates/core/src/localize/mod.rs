//! Fixed-point data of a Hamiltonian torus action with isolated fixed
//! points: regularity, renormalization of weights along a direction `xi`,
//! the localization sum and the synthesized Duistermaat-Heckman measure.

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conespline::{ConeSplineTerm, SignedConeSpline, SplineError, REGULARITY_TOL};
use crate::polycone::{dual_cone, interior_point, Cone, PolyconeError};
use crate::rational::{linalg, rat, Rat, RatVec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LocalizeError {
    #[error("model has no fixed points")]
    Empty,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point {point} has {found} weights, expected {expected}")]
    WeightCount { point: usize, expected: usize, found: usize },
    #[error("weight {index} at point {point} is zero")]
    ZeroWeight { point: usize, index: usize },
    #[error("weights at point {point} do not span t*; no proper renormalization exists")]
    WeightsDoNotSpan { point: usize },
    #[error("direction is not regular: weight {index} at point {point} vanishes on it")]
    NonRegular { point: usize, index: usize },
    #[error("Im(zeta) is not inside the convergence region")]
    OutsideRegion,
    #[error(transparent)]
    Spline(#[from] SplineError),
    #[error(transparent)]
    Cone(#[from] PolyconeError),
    #[error("invalid JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointDatum {
    pub image: RatVec,
    pub weights: Vec<RatVec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ModelDoc", into = "ModelDoc")]
pub struct FixedPointModel {
    dim: usize,
    halfdim: usize,
    points: Vec<FixedPointDatum>,
    energy_direction: Option<RatVec>,
}

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    dim: usize,
    halfdim: usize,
    points: Vec<FixedPointDatum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    xi0: Option<RatVec>,
}

impl TryFrom<ModelDoc> for FixedPointModel {
    type Error = LocalizeError;
    fn try_from(d: ModelDoc) -> Result<Self, LocalizeError> {
        FixedPointModel::new(d.dim, d.halfdim, d.points, d.xi0)
    }
}

impl From<FixedPointModel> for ModelDoc {
    fn from(m: FixedPointModel) -> Self {
        ModelDoc { dim: m.dim, halfdim: m.halfdim, points: m.points, xi0: m.energy_direction }
    }
}

impl FixedPointModel {
    /// Checks shapes, nonzero weights, and regularity of the energy direction.
    pub fn new(
        dim: usize,
        halfdim: usize,
        points: Vec<FixedPointDatum>,
        energy_direction: Option<RatVec>,
    ) -> Result<Self, LocalizeError> {
        if points.is_empty() {
            return Err(LocalizeError::Empty);
        }
        for (p, pt) in points.iter().enumerate() {
            if pt.image.dim() != dim {
                return Err(LocalizeError::DimensionMismatch { expected: dim, found: pt.image.dim() });
            }
            if pt.weights.len() != halfdim {
                return Err(LocalizeError::WeightCount {
                    point: p,
                    expected: halfdim,
                    found: pt.weights.len(),
                });
            }
            for (i, w) in pt.weights.iter().enumerate() {
                if w.dim() != dim {
                    return Err(LocalizeError::DimensionMismatch { expected: dim, found: w.dim() });
                }
                if w.is_zero() {
                    return Err(LocalizeError::ZeroWeight { point: p, index: i });
                }
            }
        }
        let m = Self { dim, halfdim, points, energy_direction: None };
        if let Some(xi) = &energy_direction {
            m.check_regular(xi)?;
        }
        Ok(Self { energy_direction, ..m })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfdim(&self) -> usize {
        self.halfdim
    }

    pub fn points(&self) -> &[FixedPointDatum] {
        &self.points
    }

    pub fn energy_direction(&self) -> Option<&RatVec> {
        self.energy_direction.as_ref()
    }

    pub fn from_json(s: &str) -> Result<Self, LocalizeError> {
        serde_json::from_str(s).map_err(|e| LocalizeError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    /// Distinct weight hyperplanes, as primitive normals up to sign.
    pub fn arrangement(&self) -> Vec<RatVec> {
        let mut out: Vec<RatVec> = Vec::new();
        for pt in &self.points {
            for w in &pt.weights {
                let p = w.primitive();
                if !out.iter().any(|q| q == &p || q == &(-&p)) {
                    out.push(p);
                }
            }
        }
        out
    }

    fn check_regular(&self, xi: &RatVec) -> Result<(), LocalizeError> {
        if xi.dim() != self.dim {
            return Err(LocalizeError::DimensionMismatch { expected: self.dim, found: xi.dim() });
        }
        for (p, pt) in self.points.iter().enumerate() {
            for (i, w) in pt.weights.iter().enumerate() {
                if w.dot(xi).is_zero() {
                    return Err(LocalizeError::NonRegular { point: p, index: i });
                }
            }
        }
        Ok(())
    }

    /// Sign pattern of the weights on `xi`, or `None` if `xi` is not regular.
    pub fn sign_vector(&self, xi: &RatVec) -> Option<Vec<i8>> {
        let mut out = Vec::new();
        for pt in &self.points {
            for w in &pt.weights {
                let s = w.dot(xi);
                if s.is_zero() {
                    return None;
                }
                out.push(if s.is_positive() { 1 } else { -1 });
            }
        }
        Some(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RenormalizedPoint {
    pub epsilon: i32,
    pub betas: Vec<RatVec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RenormalizedModel {
    pub chamber_point: RatVec,
    pub points: Vec<RenormalizedPoint>,
}

impl RenormalizedModel {
    pub fn all_betas(&self) -> Vec<RatVec> {
        self.points.iter().flat_map(|p| p.betas.iter().cloned()).collect()
    }
}

/// `beta = sign(alpha(xi)) alpha`, `epsilon(p) = prod sign(alpha(xi))`.
pub fn renormalize(m: &FixedPointModel, xi: &RatVec) -> Result<RenormalizedModel, LocalizeError> {
    m.check_regular(xi)?;
    let points = m
        .points
        .iter()
        .map(|pt| {
            let mut epsilon = 1;
            let betas = pt
                .weights
                .iter()
                .map(|w| {
                    if w.dot(xi).is_negative() {
                        epsilon = -epsilon;
                        -w
                    } else {
                        w.clone()
                    }
                })
                .collect();
            RenormalizedPoint { epsilon, betas }
        })
        .collect();
    Ok(RenormalizedModel { chamber_point: xi.clone(), points })
}

/// Working cone `C^ = cone{beta}` and its dual, where Laplace transforms
/// of the synthesized measure converge.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaRegion {
    /// `C^`
    pub support: Cone,
    /// `C^'`
    pub cone: Cone,
}

impl GammaRegion {
    /// Whether `eta` lies strictly inside `C^'`, i.e. `<beta, eta> > 0`.
    pub fn contains_interior(&self, eta: &[f64]) -> Result<bool, LocalizeError> {
        let gens = self.support.generator_list()?;
        let scale: f64 = eta.iter().map(|x| x * x).sum::<f64>().sqrt();
        Ok(gens.iter().all(|b| {
            let bf = b.to_f64();
            let nb: f64 = bf.iter().map(|x| x * x).sum::<f64>().sqrt();
            bf.iter().zip(eta).map(|(x, y)| x * y).sum::<f64>() > REGULARITY_TOL * nb * scale
        }))
    }
}

pub fn gamma_region_for(r: &RenormalizedModel, dim: usize) -> Result<GammaRegion, LocalizeError> {
    let support = Cone::from_generators(dim, crate::polycone::rays::dedup_rays(&r.all_betas()))?;
    let cone = dual_cone(&support)?;
    Ok(GammaRegion { support, cone })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// the default chamber point
    pub xi: RatVec,
    pub renormalized: RenormalizedModel,
    pub region: GammaRegion,
    /// normals of the weight hyperplanes; valid chamber points are the
    /// regular points of `Int C^'`
    pub arrangement: Vec<RatVec>,
}

/// Deterministic regular direction: the energy direction if given,
/// otherwise the first regular point on the curve `(1, t, t^2, ...)`,
/// moved to the interior point of the resulting `C^'`.
pub fn validate_model(m: &FixedPointModel) -> Result<ValidationReport, LocalizeError> {
    for (p, pt) in m.points.iter().enumerate() {
        if linalg::rank(&pt.weights) < m.dim {
            return Err(LocalizeError::WeightsDoNotSpan { point: p });
        }
    }
    let seed = match &m.energy_direction {
        Some(xi) => xi.clone(),
        None => moment_curve_point(m),
    };
    let first = renormalize(m, &seed)?;
    let region = gamma_region_for(&first, m.dim)?;
    if !region.support.is_pointed()? {
        return Err(LocalizeError::Cone(PolyconeError::NotFullDimensional));
    }
    let xi = if m.energy_direction.is_some() {
        seed
    } else {
        let eta = interior_point(&region.cone)?;
        if m.sign_vector(&eta) == m.sign_vector(&seed) { eta } else { seed }
    };
    let renormalized = renormalize(m, &xi)?;
    let region = gamma_region_for(&renormalized, m.dim)?;
    Ok(ValidationReport { xi, renormalized, region, arrangement: m.arrangement() })
}

fn moment_curve_point(m: &FixedPointModel) -> RatVec {
    let mut t: i64 = 2;
    loop {
        let mut c = Rat::one();
        let xi = RatVec(
            (0..m.dim)
                .map(|_| {
                    let out = c.clone();
                    c *= rat(t);
                    out
                })
                .collect(),
        );
        if m.sign_vector(&xi).is_some() {
            return xi;
        }
        t += 1;
    }
}

pub fn gamma_region(m: &FixedPointModel) -> Result<GammaRegion, LocalizeError> {
    Ok(validate_model(m)?.region)
}

/// Regular points inside the open cone `{x : <n, x> > 0}` for the given
/// normals, one per chamber of the weight arrangement, found on a small
/// integer grid.
pub fn chamber_representatives(
    m: &FixedPointModel,
    normals: &[RatVec],
    max: usize,
) -> Vec<RatVec> {
    let mut seen: Vec<Vec<i8>> = Vec::new();
    let mut out = Vec::new();
    for bound in 1..=6i64 {
        let range: Vec<i64> = (-bound..=bound).collect();
        let mut idx = vec![0usize; m.dim];
        loop {
            let xi = RatVec::from_ints(&idx.iter().map(|&i| range[i]).collect::<Vec<_>>());
            if normals.iter().all(|n| n.dot(&xi).is_positive()) {
                if let Some(s) = m.sign_vector(&xi) {
                    if !seen.contains(&s) {
                        seen.push(s);
                        out.push(xi);
                        if out.len() >= max {
                            return out;
                        }
                    }
                }
            }
            let mut k = 0;
            while k < m.dim {
                idx[k] += 1;
                if idx[k] < range.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == m.dim {
                break;
            }
        }
    }
    out
}

fn pair(v: &RatVec, z: &[Complex64]) -> Complex64 {
    v.to_f64().iter().zip(z).map(|(a, b)| b * *a).sum()
}

pub fn is_regular(m: &FixedPointModel, zeta: &[Complex64]) -> bool {
    if zeta.len() != m.dim {
        return false;
    }
    let zn = zeta.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    m.points.iter().all(|pt| {
        pt.weights.iter().all(|w| {
            let wf = w.to_f64();
            let wn = wf.iter().map(|x| x * x).sum::<f64>().sqrt();
            pair(w, zeta).norm() > REGULARITY_TOL * wn * zn
        })
    })
}

/// `i^n sum_p e^{i<Phi(p), zeta>} / prod_i alpha_i^p(zeta)`. With a region,
/// also requires `Im zeta` strictly inside it.
pub fn localization_sum(
    m: &FixedPointModel,
    zeta: &[Complex64],
    region: Option<&GammaRegion>,
) -> Result<Complex64, LocalizeError> {
    if zeta.len() != m.dim {
        return Err(LocalizeError::DimensionMismatch { expected: m.dim, found: zeta.len() });
    }
    if !is_regular(m, zeta) {
        let (point, index) = first_singular(m, zeta);
        return Err(LocalizeError::NonRegular { point, index });
    }
    if let Some(r) = region {
        let im: Vec<f64> = zeta.iter().map(|z| z.im).collect();
        if !r.contains_interior(&im)? {
            return Err(LocalizeError::OutsideRegion);
        }
    }
    let mut total = Complex64::new(0.0, 0.0);
    for pt in &m.points {
        let mut denom = Complex64::new(1.0, 0.0);
        for w in &pt.weights {
            denom *= pair(w, zeta);
        }
        total += (Complex64::i() * pair(&pt.image, zeta)).exp() / denom;
    }
    Ok(total * Complex64::i().powu(m.halfdim as u32))
}

fn first_singular(m: &FixedPointModel, zeta: &[Complex64]) -> (usize, usize) {
    let zn = zeta.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for (p, pt) in m.points.iter().enumerate() {
        for (i, w) in pt.weights.iter().enumerate() {
            let wn = w.to_f64().iter().map(|x| x * x).sum::<f64>().sqrt();
            if pair(w, zeta).norm() <= REGULARITY_TOL * wn * zn {
                return (p, i);
            }
        }
    }
    (0, 0)
}

/// One term per fixed point: sign `epsilon(p)`, base `Phi(p)`, factors `beta^p`.
pub fn dh_measure(m: &FixedPointModel, xi: &RatVec) -> Result<SignedConeSpline, LocalizeError> {
    let r = renormalize(m, xi)?;
    let terms = m
        .points
        .iter()
        .zip(&r.points)
        .map(|(pt, rp)| ConeSplineTerm::new(rp.epsilon, pt.image.clone(), rp.betas.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SignedConeSpline::new(m.dim, terms, None)?)
}

/// `min_p <Phi(p), xi>`.
pub fn support_min(m: &FixedPointModel, xi: &RatVec) -> Result<Rat, LocalizeError> {
    m.check_regular(xi)?;
    Ok(m.points
        .iter()
        .map(|pt| pt.image.dot(xi))
        .min()
        .expect("nonempty model"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conespline::spline_density;
    use approx::assert_relative_eq;

    fn v(xs: &[i64]) -> RatVec {
        RatVec::from_ints(xs)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn point(image: &[i64], weights: &[&[i64]]) -> FixedPointDatum {
        FixedPointDatum { image: v(image), weights: weights.iter().map(|w| v(w)).collect() }
    }

    fn sphere(lambda: i64) -> FixedPointModel {
        FixedPointModel::new(1, 1, vec![point(&[-lambda], &[&[1]]), point(&[lambda], &[&[-1]])], None)
            .unwrap()
    }

    #[test]
    fn validate_examples() {
        let m = FixedPointModel::new(1, 2, vec![point(&[0], &[&[1], &[1]])], None).unwrap();
        let r = validate_model(&m).unwrap();
        assert!(r.xi.dot(&v(&[1])).is_positive());
        assert_eq!(r.region.support.generator_list().unwrap(), vec![v(&[1])]);

        let m = FixedPointModel::new(1, 2, vec![point(&[0], &[&[1], &[-1]])], None).unwrap();
        let ren = renormalize(&m, &v(&[1])).unwrap();
        assert_eq!(ren.points[0].epsilon, -1);
        assert_eq!(ren.points[0].betas, vec![v(&[1]), v(&[1])]);

        let m = FixedPointModel::new(
            2,
            2,
            vec![point(&[0, 0], &[&[1, 0], &[0, 1]]), point(&[1, 1], &[&[1, -1], &[-1, 1]])],
            None,
        )
        .unwrap();
        assert_eq!(validate_model(&m).unwrap_err(), LocalizeError::WeightsDoNotSpan { point: 1 });
    }

    #[test]
    fn zero_weight_and_bad_energy_direction() {
        assert_eq!(
            FixedPointModel::new(1, 1, vec![point(&[0], &[&[0]])], None),
            Err(LocalizeError::ZeroWeight { point: 0, index: 0 })
        );
        assert!(FixedPointModel::new(2, 1, vec![point(&[0, 0], &[&[1, -1]])], Some(v(&[1, 1])))
            .is_err());
    }

    #[test]
    fn regularity() {
        let s = sphere(1);
        assert!(is_regular(&s, &[c(0.0, 1.0)]));
        assert!(!is_regular(&s, &[c(0.0, 0.0)]));
        let m = FixedPointModel::new(2, 2, vec![point(&[0, 0], &[&[1, -1], &[1, 0]])], None)
            .unwrap();
        assert!(!is_regular(&m, &[c(1.0, 1.0), c(1.0, 1.0)]));
    }

    #[test]
    fn localization_examples() {
        let m = FixedPointModel::new(2, 2, vec![point(&[0, 0], &[&[1, 0], &[0, 1]])], None)
            .unwrap();
        let z = [c(0.4, 1.0), c(-0.3, 0.6)];
        let got = localization_sum(&m, &z, None).unwrap();
        assert!((got - (-Complex64::new(1.0, 0.0) / (z[0] * z[1]))).norm() < 1e-14);

        for z in [0.3, 2.0] {
            let got = localization_sum(&sphere(2), &[c(z, 0.0)], None).unwrap();
            assert_relative_eq!(got.re, 2.0 * (2.0 * z).sin() / z, epsilon = 1e-14);
        }

        let m = FixedPointModel::new(1, 1, vec![point(&[5], &[&[2]])], None).unwrap();
        let got = localization_sum(&m, &[c(0.0, 1.0)], None).unwrap();
        assert_relative_eq!(got.re, (-5.0f64).exp() / 2.0, epsilon = 1e-15);
        assert_eq!(
            localization_sum(&sphere(1), &[c(0.0, 0.0)], None),
            Err(LocalizeError::NonRegular { point: 0, index: 0 })
        );
    }

    #[test]
    fn dh_measure_examples() {
        let m = FixedPointModel::new(2, 2, vec![point(&[0, 0], &[&[1, 0], &[0, 1]])], None)
            .unwrap();
        let s = dh_measure(&m, &v(&[1, 1])).unwrap();
        assert_eq!(s.terms().len(), 1);
        assert_eq!(s.terms()[0].sign(), 1);
        assert_relative_eq!(spline_density(&s, &[2.0, 3.0]).unwrap().value, 1.0);

        let s = dh_measure(&sphere(2), &v(&[1])).unwrap();
        assert_eq!(s.terms()[0].sign(), 1);
        assert_eq!(s.terms()[1].sign(), -1);
        for (x, want) in [(-1.5, 1.0), (0.0, 1.0), (1.9, 1.0), (2.5, 0.0), (-3.0, 0.0)] {
            assert_relative_eq!(spline_density(&s, &[x]).unwrap().value, want);
        }

        let m = FixedPointModel::new(2, 2, vec![point(&[0, 0], &[&[1, 0], &[1, 1]])], None)
            .unwrap();
        let s = dh_measure(&m, &v(&[1, 1])).unwrap();
        assert_relative_eq!(spline_density(&s, &[3.0, 1.0]).unwrap().value, 1.0, epsilon = 1e-12);
        assert_eq!(spline_density(&s, &[1.0, 3.0]).unwrap().value, 0.0);
    }

    #[test]
    fn gamma_region_examples() {
        let m = FixedPointModel::new(2, 2, vec![point(&[0, 0], &[&[1, 0], &[1, 1]])], None)
            .unwrap();
        let g = gamma_region(&m).unwrap();
        assert!(g.cone.contains(&v(&[1, -1])).unwrap());
        assert!(g.cone.contains(&v(&[0, 1])).unwrap());
        assert!(!g.cone.contains(&v(&[-1, 2])).unwrap());
        assert!(!g.cone.contains(&v(&[1, -2])).unwrap());
    }

    #[test]
    fn support_min_examples() {
        let m = FixedPointModel::new(1, 1, vec![point(&[1], &[&[1]]), point(&[3], &[&[1]])], None)
            .unwrap();
        assert_eq!(support_min(&m, &v(&[1])).unwrap(), rat(1));
        assert_eq!(support_min(&sphere(2), &v(&[1])).unwrap(), rat(-2));
    }

    #[test]
    fn json_round_trip() {
        let m = sphere(3);
        let back = FixedPointModel::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
        let doc = r#"{"dim":1,"halfdim":1,"points":[{"image":["1/2"],"weights":[["2"]]}],"xi0":["1"]}"#;
        let m = FixedPointModel::from_json(doc).unwrap();
        assert_eq!(m.energy_direction(), Some(&v(&[1])));
    }
}
