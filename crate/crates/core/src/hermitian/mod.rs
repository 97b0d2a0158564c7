//! Hermitian symmetric pairs of type AIII (`su(p,q)`) and CI (`sp(r,R)`):
//! compact/noncompact positive roots, the compact Weyl group, elliptic
//! orbit fixed-point models and their T-type and K-type measures.
//!
//! Invariant form: the trace form of the defining representation. In
//! coordinates it is a Gram matrix `G` on `t`; `t*` coordinates pair with
//! `t` coordinates by the plain dot product, so `<mu, nu> = mu^T G^{-1} nu`
//! and the Killing dual of `alpha` is `G^{-1} alpha`.

pub mod exprat;

use std::collections::HashSet;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conespline::{ConeSplineTerm, SignedConeSpline, SplineError};
use crate::localize::{self, FixedPointDatum, FixedPointModel, LocalizeError};
use crate::polynomial::Polynomial;
use crate::rational::{linalg, rat, ratio, Rat, RatVec};
pub use exprat::{ExpRationalError, ExpRationalSum};

/// Upper bound on the generated Weyl group (10!).
pub const MAX_WEYL: usize = 3_628_800;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HermitianError {
    #[error("unsupported family {0:?}")]
    UnsupportedFamily(String),
    #[error("bad parameters for {family}: {reason}")]
    BadParams { family: String, reason: String },
    #[error("pair invariant violated: {0}")]
    Invariant(String),
    #[error("Weyl group exceeds {0} elements")]
    WeylTooLarge(usize),
    #[error("lambda has {found} coordinates, expected {expected}")]
    LambdaDimension { expected: usize, found: usize },
    #[error("lambda is not in the noncompact cone: <alpha_{index}, lambda> <= 0")]
    NotInNoncompactCone { index: usize },
    #[error("lambda is singular: P(lambda) = 0")]
    SingularLambda,
    #[error("compact weights at fixed point {point} do not match the compact roots up to sign")]
    CompactMismatch { point: usize },
    #[error("sign bookkeeping disagrees with det(w) at fixed point {point}")]
    SignMismatch { point: usize },
    #[error("zeta is not regular for the noncompact weights")]
    NonRegular,
    #[error("Im(zeta) is not strictly positive on the noncompact roots")]
    OutsideRegion,
    #[error(transparent)]
    Localize(#[from] LocalizeError),
    #[error(transparent)]
    Spline(#[from] SplineError),
    #[error(transparent)]
    ExpRational(#[from] ExpRationalError),
    #[error("invalid JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    AIII,
    CI,
}

impl std::str::FromStr for Family {
    type Err = HermitianError;
    fn from_str(s: &str) -> Result<Self, HermitianError> {
        match s {
            "AIII" => Ok(Family::AIII),
            "CI" => Ok(Family::CI),
            other => Err(HermitianError::UnsupportedFamily(other.to_string())),
        }
    }
}

pub type Matrix = Vec<RatVec>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HermitianPairData {
    pub family: Family,
    pub params: Vec<usize>,
    /// `d = dim t`
    pub rank: usize,
    /// positive roots in `t*` coordinates, the first `compact` are compact
    pub roots: Vec<RatVec>,
    pub compact: usize,
    /// Gram matrix of the trace form on `t`
    pub gram: Matrix,
    /// `xi_i = G^{-1} alpha_i` for the compact roots
    pub killing_duals: Vec<RatVec>,
    /// row-major matrices acting on `t*` coordinates
    pub weyl: Vec<Matrix>,
    pub center_vector: RatVec,
}

impl HermitianPairData {
    /// `n`: number of positive roots.
    pub fn halfdim(&self) -> usize {
        self.roots.len()
    }

    pub fn compact_roots(&self) -> &[RatVec] {
        &self.roots[..self.compact]
    }

    pub fn noncompact_roots(&self) -> &[RatVec] {
        &self.roots[self.compact..]
    }

    fn gram_inv(&self) -> Matrix {
        linalg::inverse(&self.gram).expect("trace form is nondegenerate")
    }

    /// `<mu, nu> = mu^T G^{-1} nu`.
    pub fn form(&self, mu: &RatVec, nu: &RatVec) -> Rat {
        mu.dot(&linalg::mat_vec(&self.gram_inv(), nu))
    }

    /// `P(mu) = prod_{i <= k} <mu, xi_i>`.
    pub fn p_polynomial(&self) -> Polynomial {
        self.killing_duals
            .iter()
            .fold(Polynomial::one(self.rank), |acc, xi| acc.mul(&Polynomial::linear(xi)))
    }

    pub fn weyl_json(&self) -> String {
        serde_json::to_string_pretty(&self.weyl).expect("matrices serialize")
    }
}

fn det_sign(m: &Matrix) -> i32 {
    if linalg::det(m).is_positive() {
        1
    } else {
        -1
    }
}

pub fn weyl_sign(w: &Matrix) -> i32 {
    det_sign(w)
}

fn reflection(alpha: &RatVec, gram_inv: &Matrix) -> Matrix {
    let g_alpha = linalg::mat_vec(gram_inv, alpha);
    let norm = alpha.dot(&g_alpha);
    let d = alpha.dim();
    (0..d)
        .map(|i| {
            RatVec(
                (0..d)
                    .map(|j| {
                        let id = if i == j { Rat::one() } else { Rat::zero() };
                        id - rat(2) * &alpha[i] * &g_alpha[j] / &norm
                    })
                    .collect(),
            )
        })
        .collect()
}

fn generate_group(gens: &[Matrix], d: usize) -> Result<Vec<Matrix>, HermitianError> {
    let mut elements: Vec<Matrix> = vec![linalg::identity(d)];
    let mut seen: HashSet<Matrix> = elements.iter().cloned().collect();
    let mut frontier = elements.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            for s in gens {
                let ws = linalg::mat_mul(s, w);
                if seen.insert(ws.clone()) {
                    if seen.len() > MAX_WEYL {
                        return Err(HermitianError::WeylTooLarge(MAX_WEYL));
                    }
                    elements.push(ws.clone());
                    next.push(ws);
                }
            }
        }
        frontier = next;
    }
    Ok(elements)
}

fn sorted(mut v: Vec<RatVec>) -> Vec<RatVec> {
    v.sort();
    v
}

pub fn build_pair(family: Family, params: &[usize]) -> Result<HermitianPairData, HermitianError> {
    let bad = |reason: &str| HermitianError::BadParams {
        family: format!("{family:?}"),
        reason: reason.to_string(),
    };
    let (rank, compact_roots, noncompact_roots, gram, center): (
        usize,
        Vec<RatVec>,
        Vec<RatVec>,
        Matrix,
        RatVec,
    ) = match family {
        Family::AIII => {
            let [p, q] = params else { return Err(bad("expected [p, q]")) };
            let (p, q) = (*p, *q);
            if p == 0 || q == 0 || p + q > 5 {
                return Err(bad("need p, q >= 1 and p + q <= 5"));
            }
            let n = p + q;
            let d = n - 1;
            // t* coordinates c_j = mu_j - mu_N on the basis h_j = E_j - E_N
            let root = |a: usize, b: usize| -> RatVec {
                let e = |k: usize| -> Vec<i64> {
                    (0..d).map(|j| i64::from(j == k) - i64::from(k == n - 1)).collect()
                };
                let (ea, eb) = (e(a), e(b));
                RatVec::from_ints(&ea.iter().zip(&eb).map(|(x, y)| x - y).collect::<Vec<_>>())
            };
            let mut comp = Vec::new();
            for (lo, hi) in [(0, p), (p, n)] {
                for a in lo..hi {
                    for b in a + 1..hi {
                        comp.push(root(a, b));
                    }
                }
            }
            let mut nonc = Vec::new();
            for a in 0..p {
                for b in p..n {
                    nonc.push(root(a, b));
                }
            }
            let gram: Matrix = (0..d)
                .map(|i| RatVec::from_ints(&(0..d).map(|j| 1 + i64::from(i == j)).collect::<Vec<_>>()))
                .collect();
            // (q,..,q,-p,..,-p)/N with the last entry dropped
            let center = RatVec(
                (0..d)
                    .map(|j| if j < p { ratio(q as i64, n as i64) } else { ratio(-(p as i64), n as i64) })
                    .collect(),
            );
            (d, comp, nonc, gram, center)
        }
        Family::CI => {
            let [r] = params else { return Err(bad("expected [r]")) };
            let r = *r;
            if r == 0 || r > 3 {
                return Err(bad("need 1 <= r <= 3"));
            }
            let e = |i: usize| RatVec::unit(r, i);
            let mut comp = Vec::new();
            let mut nonc = Vec::new();
            for i in 0..r {
                for j in i + 1..r {
                    comp.push(&e(i) - &e(j));
                    nonc.push(&e(i) + &e(j));
                }
            }
            for i in 0..r {
                nonc.push(e(i).scale(&rat(2)));
            }
            let gram: Matrix = (0..r).map(|i| e(i).scale(&rat(2))).collect();
            let center = RatVec((0..r).map(|_| ratio(1, 2)).collect());
            (r, comp, nonc, gram, center)
        }
    };
    let gram_inv = linalg::inverse(&gram).expect("trace form is nondegenerate");
    let gens: Vec<Matrix> = compact_roots.iter().map(|a| reflection(a, &gram_inv)).collect();
    let weyl = generate_group(&gens, rank)?;
    let killing_duals = compact_roots.iter().map(|a| linalg::mat_vec(&gram_inv, a)).collect();
    let compact = compact_roots.len();
    let mut roots = compact_roots;
    roots.extend(noncompact_roots);
    let pair = HermitianPairData {
        family,
        params: params.to_vec(),
        rank,
        roots,
        compact,
        gram,
        killing_duals,
        weyl,
        center_vector: center,
    };
    check_pair(&pair)?;
    Ok(pair)
}

fn check_pair(pair: &HermitianPairData) -> Result<(), HermitianError> {
    let fail = |s: &str| Err(HermitianError::Invariant(s.to_string()));
    for a in pair.noncompact_roots() {
        if a.dot(&pair.center_vector) != Rat::one() {
            return fail("alpha(xi_0) != 1 on a noncompact root");
        }
    }
    for a in pair.compact_roots() {
        if !a.dot(&pair.center_vector).is_zero() {
            return fail("xi_0 is not central");
        }
    }
    let nonc = sorted(pair.noncompact_roots().to_vec());
    for w in &pair.weyl {
        let image = sorted(nonc.iter().map(|a| linalg::mat_vec(w, a)).collect());
        if image != nonc {
            return fail("noncompact roots are not Weyl stable");
        }
        let d = linalg::det(w);
        if d != Rat::one() && d != -Rat::one() {
            return fail("Weyl element with det != +-1");
        }
    }
    for a in &nonc {
        for b in &nonc {
            if pair.form(a, b).is_negative() {
                return fail("negative pairing of noncompact roots");
            }
        }
    }
    let set: HashSet<&Matrix> = pair.weyl.iter().collect();
    for x in &pair.weyl {
        for y in &pair.weyl {
            if !set.contains(&linalg::mat_mul(x, y)) {
                return fail("Weyl elements not closed under products");
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitDoc {
    pub family: Family,
    pub params: Vec<usize>,
    pub lambda: RatVec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSpec {
    pub pair: HermitianPairData,
    /// `t*` coordinates
    pub lambda: RatVec,
}

impl OrbitSpec {
    /// For AIII, `lambda` may also be given with `p + q` entries on the
    /// diagonal; it is then reduced to `c_j = lambda_j - lambda_N`.
    pub fn new(pair: HermitianPairData, lambda: RatVec) -> Result<Self, HermitianError> {
        let lambda = if pair.family == Family::AIII && lambda.dim() == pair.rank + 1 {
            let last = lambda[pair.rank].clone();
            RatVec(lambda.iter().take(pair.rank).map(|x| x - &last).collect())
        } else {
            lambda
        };
        if lambda.dim() != pair.rank {
            return Err(HermitianError::LambdaDimension { expected: pair.rank, found: lambda.dim() });
        }
        for (i, a) in pair.noncompact_roots().iter().enumerate() {
            if !pair.form(a, &lambda).is_positive() {
                return Err(HermitianError::NotInNoncompactCone { index: pair.compact + i });
            }
        }
        if pair.p_polynomial().eval_exact(&lambda).is_zero() {
            return Err(HermitianError::SingularLambda);
        }
        Ok(Self { pair, lambda })
    }

    pub fn from_doc(doc: &OrbitDoc) -> Result<Self, HermitianError> {
        OrbitSpec::new(build_pair(doc.family, &doc.params)?, doc.lambda.clone())
    }

    pub fn from_json(s: &str) -> Result<Self, HermitianError> {
        let doc: OrbitDoc = serde_json::from_str(s).map_err(|e| HermitianError::Json(e.to_string()))?;
        Self::from_doc(&doc)
    }

    /// `xi` dual to `lambda` under the invariant form.
    pub fn lambda_dual(&self) -> RatVec {
        linalg::mat_vec(&self.pair.gram_inv(), &self.lambda)
    }

    /// Whether `lambda` is dominant for every positive root.
    pub fn is_dominant(&self) -> bool {
        self.pair.roots.iter().all(|a| self.pair.form(a, &self.lambda).is_positive())
    }
}

/// Regular proper direction near `xi_0`: `xi_0` itself annihilates the
/// compact roots, so it is moved a small step toward `lambda`.
pub fn energy_direction(o: &OrbitSpec) -> RatVec {
    let pair = &o.pair;
    let dual = o.lambda_dual();
    let mut step = ratio(1, 10);
    loop {
        let xi = &pair.center_vector + &dual.scale(&step);
        let ok = pair.weyl.iter().all(|w| {
            pair.roots.iter().enumerate().all(|(i, a)| {
                let v = linalg::mat_vec(w, a).dot(&xi);
                if i < pair.compact { !v.is_zero() } else { v.is_positive() }
            })
        });
        if ok {
            return xi;
        }
        step /= rat(10);
    }
}

/// One fixed point per Weyl element, in the order of `pair.weyl`: image
/// `w lambda`, weights `w alpha_i`.
pub fn orbit_model(o: &OrbitSpec) -> Result<FixedPointModel, HermitianError> {
    let pair = &o.pair;
    let p = pair.p_polynomial();
    let mut points = Vec::with_capacity(pair.weyl.len());
    for w in &pair.weyl {
        let image = linalg::mat_vec(w, &o.lambda);
        if p.eval_exact(&image).is_zero() {
            return Err(HermitianError::SingularLambda);
        }
        let weights = pair.roots.iter().map(|a| linalg::mat_vec(w, a)).collect();
        points.push(FixedPointDatum { image, weights });
    }
    Ok(FixedPointModel::new(pair.rank, pair.halfdim(), points, Some(energy_direction(o)))?)
}

/// `sum_w eps(w) delta_{w lambda} * H_{beta}` via renormalization along
/// `xi` (default: dual of `lambda`). When `lambda` is dominant the signs
/// are checked against `det w`.
pub fn t_type_measure(o: &OrbitSpec, xi: Option<&RatVec>) -> Result<SignedConeSpline, HermitianError> {
    let model = orbit_model(o)?;
    let xi = xi.cloned().unwrap_or_else(|| o.lambda_dual());
    let ren = localize::renormalize(&model, &xi)?;
    if o.is_dominant() && xi == o.lambda_dual() {
        for (p, (rp, w)) in ren.points.iter().zip(&o.pair.weyl).enumerate() {
            if rp.epsilon != det_sign(w) {
                return Err(HermitianError::SignMismatch { point: p });
            }
        }
    }
    Ok(localize::dh_measure(&model, &xi)?)
}

/// `epsilon^p` from matching the compact weights at each fixed point to
/// `+-alpha_1..alpha_k`; checked against `det w`.
pub fn compact_signs(o: &OrbitSpec) -> Result<Vec<i32>, HermitianError> {
    let pair = &o.pair;
    let compact = pair.compact_roots();
    let mut out = Vec::with_capacity(pair.weyl.len());
    for (p, w) in pair.weyl.iter().enumerate() {
        let mut used = vec![false; compact.len()];
        let mut sign = 1;
        for a in compact {
            let wa = linalg::mat_vec(w, a);
            let hit = compact.iter().enumerate().find(|(j, b)| !used[*j] && (**b == wa || **b == -&wa));
            match hit {
                Some((j, b)) => {
                    used[j] = true;
                    if *b != wa {
                        sign = -sign;
                    }
                }
                None => return Err(HermitianError::CompactMismatch { point: p }),
            }
        }
        if sign != det_sign(w) {
            return Err(HermitianError::SignMismatch { point: p });
        }
        out.push(sign);
    }
    Ok(out)
}

/// `nu = P * sum_w eps(w) delta_{w lambda} * H_{alpha_{k+1}} * ... * H_{alpha_n}`.
pub fn k_type_measure(o: &OrbitSpec) -> Result<SignedConeSpline, HermitianError> {
    let signs = compact_signs(o)?;
    let pair = &o.pair;
    let factors = pair.noncompact_roots().to_vec();
    let terms = pair
        .weyl
        .iter()
        .zip(&signs)
        .map(|(w, &s)| ConeSplineTerm::new(s, linalg::mat_vec(w, &o.lambda), factors.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SignedConeSpline::new(pair.rank, terms, Some(pair.p_polynomial()))?)
}

/// The sum `sum_p eps^p e^{i<w lambda, zeta>} / prod_{i > k} alpha_i(zeta)`
/// before differentiation.
pub fn nu_generating_sum(o: &OrbitSpec) -> Result<ExpRationalSum, HermitianError> {
    let signs = compact_signs(o)?;
    let mut s = ExpRationalSum::zero(o.pair.rank);
    for (w, sign) in o.pair.weyl.iter().zip(signs) {
        s.add_term(
            Complex64::new(sign as f64, 0.0),
            linalg::mat_vec(w, &o.lambda),
            o.pair.noncompact_roots(),
        )?;
    }
    Ok(s)
}

/// Closed-form transform of `nu`: `(-1)^k i^n prod_i d_{xi_i}` applied to
/// the generating sum. With `strict`, `Im zeta` must be positive on every
/// noncompact root.
pub fn laplace_nu_symbolic(
    o: &OrbitSpec,
    zeta: &[Complex64],
    strict: bool,
) -> Result<Complex64, HermitianError> {
    let pair = &o.pair;
    if zeta.len() != pair.rank {
        return Err(HermitianError::LambdaDimension { expected: pair.rank, found: zeta.len() });
    }
    let zn = zeta.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for a in pair.noncompact_roots() {
        let af = a.to_f64();
        let an = af.iter().map(|x| x * x).sum::<f64>().sqrt();
        let v: Complex64 = af.iter().zip(zeta).map(|(x, z)| z * *x).sum();
        if v.norm() <= crate::conespline::REGULARITY_TOL * an * zn {
            return Err(HermitianError::NonRegular);
        }
        if strict && v.im <= 0.0 {
            return Err(HermitianError::OutsideRegion);
        }
    }
    let mut s = nu_generating_sum(o)?;
    for xi in &pair.killing_duals {
        s = s.derivative(xi)?;
    }
    let k = pair.compact as u32;
    let n = pair.halfdim() as u32;
    let factor = Complex64::i().powu(n) * if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(s.eval(zeta)? * factor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conespline::spline_density;
    use approx::assert_relative_eq;

    fn v(xs: &[i64]) -> RatVec {
        RatVec::from_ints(xs)
    }

    #[test]
    fn pair_sizes() {
        let su11 = build_pair(Family::AIII, &[1, 1]).unwrap();
        assert_eq!((su11.rank, su11.compact, su11.halfdim(), su11.weyl.len()), (1, 0, 1, 1));
        assert_eq!(su11.roots, vec![v(&[2])]);
        assert_eq!(su11.p_polynomial(), Polynomial::one(1));

        let su21 = build_pair(Family::AIII, &[2, 1]).unwrap();
        assert_eq!((su21.compact, su21.halfdim(), su21.weyl.len()), (1, 3, 2));
        let signs: Vec<i32> = su21.weyl.iter().map(weyl_sign).collect();
        assert_eq!(signs.iter().sum::<i32>(), 0);

        let sp2 = build_pair(Family::CI, &[2]).unwrap();
        assert_eq!((sp2.compact, sp2.halfdim() - sp2.compact, sp2.weyl.len()), (1, 3, 2));

        let su22 = build_pair(Family::AIII, &[2, 2]).unwrap();
        assert_eq!(su22.weyl.len(), 4);
        let su32 = build_pair(Family::AIII, &[3, 2]).unwrap();
        assert_eq!(su32.weyl.len(), 12);
        assert_eq!(build_pair(Family::CI, &[3]).unwrap().weyl.len(), 6);
        assert!(build_pair(Family::AIII, &[4, 2]).is_err());
        assert!("BDI".parse::<Family>().is_err());
    }

    #[test]
    fn orbit_examples() {
        let su11 = build_pair(Family::AIII, &[1, 1]).unwrap();
        let o = OrbitSpec::new(su11, v(&[2])).unwrap();
        let m = orbit_model(&o).unwrap();
        assert_eq!(m.points().len(), 1);
        assert_eq!(m.points()[0].image, v(&[2]));
        assert_eq!(m.points()[0].weights, vec![v(&[2])]);

        let su21 = build_pair(Family::AIII, &[2, 1]).unwrap();
        let o = OrbitSpec::new(su21.clone(), v(&[3, 1, -4])).unwrap();
        assert_eq!(o.lambda, v(&[7, 5]));
        let m = orbit_model(&o).unwrap();
        let mut images: Vec<RatVec> = m.points().iter().map(|p| p.image.clone()).collect();
        images.sort();
        assert_eq!(images, vec![v(&[5, 7]), v(&[7, 5])]);

        // lambda = (1, 1, -2) lies on the compact wall
        assert_eq!(
            OrbitSpec::new(su21.clone(), v(&[1, 1, -2])).unwrap_err(),
            HermitianError::SingularLambda
        );
        assert!(matches!(
            OrbitSpec::new(su21, v(&[-3, 1, 2])),
            Err(HermitianError::NotInNoncompactCone { .. })
        ));
    }

    #[test]
    fn su11_measures_agree() {
        let o = OrbitSpec::new(build_pair(Family::AIII, &[1, 1]).unwrap(), v(&[2])).unwrap();
        let t = t_type_measure(&o, None).unwrap();
        let k = k_type_measure(&o).unwrap();
        for x in [1.0, 2.5, 7.0] {
            let a = spline_density(&t, &[x]).unwrap().value;
            let b = spline_density(&k, &[x]).unwrap().value;
            assert_relative_eq!(a, b, epsilon = 1e-14);
        }
        assert_relative_eq!(spline_density(&t, &[4.0]).unwrap().value, 0.5, epsilon = 1e-14);
        let z = Complex64::new(0.3, 0.9);
        let got = laplace_nu_symbolic(&o, &[z], true).unwrap();
        let want = Complex64::i() * (Complex64::i() * 2.0 * z).exp() / (2.0 * z);
        assert!((got - want).norm() < 1e-14);
    }

    #[test]
    fn su21_nu_is_weyl_invariant() {
        let o = OrbitSpec::new(build_pair(Family::AIII, &[2, 1]).unwrap(), v(&[3, 1, -4])).unwrap();
        let nu = k_type_measure(&o).unwrap();
        let s = &o.pair.weyl.iter().find(|w| weyl_sign(w) == -1).unwrap();
        for mu in [[9.0, 8.0], [12.0, 7.5], [6.3, 10.1]] {
            let smu: Vec<f64> = (0..2)
                .map(|i| s[i].to_f64().iter().zip(&mu).map(|(a, b)| a * b).sum())
                .collect();
            let a = spline_density(&nu, &mu).unwrap().value;
            let b = spline_density(&nu, &smu).unwrap().value;
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
            assert!(a >= -1e-9);
        }
        let t = t_type_measure(&o, None).unwrap();
        assert_eq!(t.terms().len(), 2);
    }
}
