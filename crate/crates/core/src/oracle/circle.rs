//! The truncated integral `∫_{H <= a} e^{i z H}` on `M = C` with
//! `H = alpha |w|^2 / 2`, against the fixed-point term plus the boundary
//! term coming from the reduced space `M_a` (a point of mass `1/alpha`).

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use serde::Serialize;

use super::{ComplexDoc, OracleError};

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// One (sign, normalization) choice and how far it is from the quadrature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleCandidate {
    /// sign in front of the boundary term
    pub sign: i32,
    /// the Liouville form is `normalization * omega`
    pub normalization: f64,
    pub label: String,
    pub difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleReport {
    pub alpha: i64,
    pub z: ComplexDoc,
    pub a: f64,
    /// quadrature of the truncated integral under the selected normalization
    pub lhs: ComplexDoc,
    pub fixed_point_term: ComplexDoc,
    pub boundary_term: ComplexDoc,
    pub rhs: ComplexDoc,
    pub difference: f64,
    pub sign: i32,
    pub normalization: f64,
    pub normalization_label: String,
    pub candidates: Vec<CircleCandidate>,
}

/// `∫_{|w|^2 alpha/2 <= a} e^{i z H} dA` in Lebesgue area, by polar
/// reduction to `(2 pi / alpha) ∫_0^a e^{i z h} dh` and Gauss-Legendre.
pub fn truncated_area_integral(alpha: f64, z: Complex64, a: f64) -> Complex64 {
    let rule = GaussLegendre::new(24).expect("valid degree");
    let panels = (z.norm() * a / 4.0).ceil().max(4.0) as usize;
    let h = a / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let (lo, hi) = (p as f64 * h, (p + 1) as f64 * h);
        let re = rule.integrate(lo, hi, |x| (Complex64::i() * z * x).exp().re);
        let im = rule.integrate(lo, hi, |x| (Complex64::i() * z * x).exp().im);
        total += Complex64::new(re, im);
    }
    total * (TAU / alpha)
}

pub fn truncated_circle_check(alpha: i64, z: Complex64, a: f64) -> Result<CircleReport, OracleError> {
    if !(a > 0.0) {
        return Err(OracleError::NonPositiveLevel(a));
    }
    if alpha <= 0 {
        return Err(OracleError::InvalidConfig("weight must be a positive integer".into()));
    }
    if z.norm() == 0.0 {
        return Err(OracleError::InvalidConfig("z must be nonzero".into()));
    }
    let al = alpha as f64;
    let raw = truncated_area_integral(al, z, a);
    let i = Complex64::i();
    let fixed = i / (al * z);
    let boundary = (i * z * a).exp() / (i * z) / al;

    let mut candidates = Vec::new();
    for (normalization, label) in [(1.0 / TAU, "(2pi)^-n"), (1.0 / (TAU * TAU), "(2pi)^-2n")] {
        for sign in [1, -1] {
            let rhs = fixed + boundary * sign as f64;
            candidates.push(CircleCandidate {
                sign,
                normalization,
                label: label.to_string(),
                difference: (raw * normalization - rhs).norm(),
            });
        }
    }
    let best = candidates
        .iter()
        .min_by(|x, y| x.difference.partial_cmp(&y.difference).unwrap())
        .expect("four candidates")
        .clone();
    let rhs = fixed + boundary * best.sign as f64;
    Ok(CircleReport {
        alpha,
        z: z.into(),
        a,
        lhs: (raw * best.normalization).into(),
        fixed_point_term: fixed.into(),
        boundary_term: (boundary * best.sign as f64).into(),
        rhs: rhs.into(),
        difference: best.difference,
        sign: best.sign,
        normalization: best.normalization,
        normalization_label: best.label,
        candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn consistent_choice_is_unique() {
        let r = truncated_circle_check(1, Complex64::new(0.0, 1.0), 1.5).unwrap();
        assert!(r.difference < 1e-12, "{r:?}");
        assert_eq!(r.sign, 1);
        assert_eq!(r.normalization_label, "(2pi)^-n");
        assert!(r.candidates.iter().filter(|c| c.difference < 1e-6).count() == 1);
    }

    #[test]
    fn boundary_term_decays() {
        let z = Complex64::new(0.3, 1.0);
        let r = truncated_circle_check(2, z, 40.0).unwrap();
        let b = Complex64::new(r.boundary_term.0[0], r.boundary_term.0[1]).norm();
        let f = Complex64::new(r.fixed_point_term.0[0], r.fixed_point_term.0[1]).norm();
        assert!(b / f < 1e-6);
    }

    #[test]
    fn non_positive_level() {
        assert_eq!(
            truncated_circle_check(1, Complex64::new(0.0, 1.0), -1.0).unwrap_err(),
            OracleError::NonPositiveLevel(-1.0)
        );
    }
}
