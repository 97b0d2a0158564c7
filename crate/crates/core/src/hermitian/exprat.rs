//! Finite sums `sum c e^{i<mu, zeta>} / prod l_j(zeta)^{m_j}` closed under
//! directional derivatives in `zeta`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::rational::{format_rat, rat_to_f64, RatVec};

/// Coefficients below this magnitude are dropped.
pub const PRUNE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExpRationalError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("denominator form vanishes at zeta")]
    VanishingDenominator,
    #[error("denominator form must be nonzero")]
    ZeroForm,
}

/// Sorted list of (normalized form, multiplicity).
pub type Denominator = Vec<(RatVec, u32)>;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExpRationalSum {
    dim: usize,
    terms: BTreeMap<(RatVec, Denominator), Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermView {
    pub coeff: [f64; 2],
    pub exponent: Vec<String>,
    pub denominator: Vec<(Vec<String>, u32)>,
}

/// Scales `l` so its first nonzero coordinate is positive and primitive;
/// returns the form and `c` with `l = c * form`.
fn normalize_form(l: &RatVec) -> (RatVec, f64) {
    let p = l.primitive();
    let first = p.iter().find(|x| !x.is_zero()).expect("nonzero form");
    let p = if first.is_negative() { -&p } else { p };
    let k = p.iter().position(|x| !x.is_zero()).unwrap();
    (p.clone(), rat_to_f64(&l[k]) / rat_to_f64(&p[k]))
}

impl ExpRationalSum {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff * e^{i<exponent, zeta>} / prod forms(zeta)`.
    pub fn add_term(
        &mut self,
        coeff: Complex64,
        exponent: RatVec,
        forms: &[RatVec],
    ) -> Result<(), ExpRationalError> {
        if exponent.dim() != self.dim {
            return Err(ExpRationalError::DimensionMismatch { expected: self.dim, found: exponent.dim() });
        }
        let mut coeff = coeff;
        let mut denom: BTreeMap<RatVec, u32> = BTreeMap::new();
        for l in forms {
            if l.dim() != self.dim {
                return Err(ExpRationalError::DimensionMismatch { expected: self.dim, found: l.dim() });
            }
            if l.is_zero() {
                return Err(ExpRationalError::ZeroForm);
            }
            let (f, c) = normalize_form(l);
            coeff /= c;
            *denom.entry(f).or_insert(0) += 1;
        }
        self.insert(exponent, denom.into_iter().collect(), coeff);
        Ok(())
    }

    fn insert(&mut self, exponent: RatVec, denom: Denominator, coeff: Complex64) {
        let key = (exponent, denom);
        let entry = self.terms.entry(key.clone()).or_insert(Complex64::zero());
        *entry += coeff;
        if entry.norm() < PRUNE_TOL {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(self.dim);
        for ((e, d), v) in &self.terms {
            out.insert(e.clone(), d.clone(), v * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((e, d), v) in &other.terms {
            out.insert(e.clone(), d.clone(), *v);
        }
        out
    }

    /// Directional derivative `d/dt f(zeta + t xi)` at `t = 0`.
    pub fn derivative(&self, xi: &RatVec) -> Result<Self, ExpRationalError> {
        if xi.dim() != self.dim {
            return Err(ExpRationalError::DimensionMismatch { expected: self.dim, found: xi.dim() });
        }
        let mut out = Self::zero(self.dim);
        for ((e, d), c) in &self.terms {
            let mu_xi = rat_to_f64(&e.dot(xi));
            if mu_xi != 0.0 {
                out.insert(e.clone(), d.clone(), c * Complex64::new(0.0, mu_xi));
            }
            for (j, (l, m)) in d.iter().enumerate() {
                let l_xi = rat_to_f64(&l.dot(xi));
                if l_xi == 0.0 {
                    continue;
                }
                let mut nd = d.clone();
                nd[j].1 += 1;
                out.insert(e.clone(), nd, c * (-(*m as f64) * l_xi));
            }
        }
        Ok(out)
    }

    pub fn eval(&self, zeta: &[Complex64]) -> Result<Complex64, ExpRationalError> {
        if zeta.len() != self.dim {
            return Err(ExpRationalError::DimensionMismatch { expected: self.dim, found: zeta.len() });
        }
        let pair = |v: &RatVec| -> Complex64 { v.to_f64().iter().zip(zeta).map(|(a, z)| z * *a).sum() };
        let zn = zeta.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut total = Complex64::zero();
        for ((e, d), c) in &self.terms {
            let mut den = Complex64::new(1.0, 0.0);
            for (l, m) in d {
                let v = pair(l);
                let ln = l.to_f64().iter().map(|x| x * x).sum::<f64>().sqrt();
                if v.norm() <= crate::conespline::REGULARITY_TOL * ln * zn {
                    return Err(ExpRationalError::VanishingDenominator);
                }
                den *= v.powu(*m);
            }
            total += c * (Complex64::i() * pair(e)).exp() / den;
        }
        Ok(total)
    }

    pub fn terms(&self) -> Vec<TermView> {
        self.terms
            .iter()
            .map(|((e, d), c)| TermView {
                coeff: [c.re, c.im],
                exponent: e.iter().map(format_rat).collect(),
                denominator: d
                    .iter()
                    .map(|(l, m)| (l.iter().map(format_rat).collect(), *m))
                    .collect(),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> RatVec {
        RatVec::from_ints(xs)
    }

    #[test]
    fn one_step_product_rule() {
        // D_xi (e^{i<mu,zeta>} / l(zeta)) = i<mu,xi> e / l - l(xi) e / l^2
        let mu = v(&[2, -1]);
        let l = v(&[1, 3]);
        let xi = v(&[1, 1]);
        let mut s = ExpRationalSum::zero(2);
        s.add_term(Complex64::new(1.0, 0.0), mu.clone(), std::slice::from_ref(&l)).unwrap();
        let ds = s.derivative(&xi).unwrap();
        let z = [Complex64::new(0.3, 0.8), Complex64::new(-0.2, 0.5)];
        let e = (Complex64::i() * (z[0] * 2.0 - z[1])).exp();
        let lz = z[0] + z[1] * 3.0;
        let want = Complex64::i() * 1.0 * e / lz - 4.0 * e / (lz * lz);
        assert!((ds.eval(&z).unwrap() - want).norm() < 1e-14);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let mut s = ExpRationalSum::zero(2);
        s.add_term(Complex64::new(0.5, -1.0), v(&[1, 2]), &[v(&[1, 0]), v(&[-1, 1]), v(&[1, 0])])
            .unwrap();
        s.add_term(Complex64::new(-2.0, 0.0), v(&[0, 1]), &[v(&[2, 1])]).unwrap();
        let xi = v(&[1, -2]);
        let z = [Complex64::new(0.4, 1.1), Complex64::new(0.3, 0.7)];
        let h = 1e-6;
        let zp = [z[0] + h, z[1] - 2.0 * h];
        let zm = [z[0] - h, z[1] + 2.0 * h];
        let fd = (s.eval(&zp).unwrap() - s.eval(&zm).unwrap()) / (2.0 * h);
        let exact = s.derivative(&xi).unwrap().eval(&z).unwrap();
        assert!((fd - exact).norm() < 1e-6 * exact.norm());
    }

    #[test]
    fn like_terms_merge_and_cancel() {
        let mut s = ExpRationalSum::zero(1);
        s.add_term(Complex64::new(1.0, 0.0), v(&[1]), &[v(&[2])]).unwrap();
        s.add_term(Complex64::new(1.0, 0.0), v(&[1]), &[v(&[-1])]).unwrap();
        // 1/(2z) - 1/z = -1/(2z)
        assert_eq!(s.len(), 1);
        s.add_term(Complex64::new(0.5, 0.0), v(&[1]), &[v(&[1])]).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn vanishing_denominator() {
        let mut s = ExpRationalSum::zero(2);
        s.add_term(Complex64::new(1.0, 0.0), v(&[0, 0]), &[v(&[1, -1])]).unwrap();
        let z = [Complex64::new(1.0, 1.0), Complex64::new(1.0, 1.0)];
        assert_eq!(s.eval(&z), Err(ExpRationalError::VanishingDenominator));
    }
}
