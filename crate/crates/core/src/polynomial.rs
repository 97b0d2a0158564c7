//! Sparse multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{format_rat, rat_to_f64, Rat, RatInput, RatVec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rat::one())
    }

    pub fn constant(dim: usize, c: Rat) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    /// The linear form `mu -> <mu, xi>`.
    pub fn linear(xi: &RatVec) -> Self {
        let dim = xi.dim();
        let mut p = Self::zero(dim);
        for (j, c) in xi.iter().enumerate() {
            let mut e = vec![0; dim];
            e[j] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, exponent: Vec<u32>, coeff: Rat) {
        assert_eq!(exponent.len(), self.dim, "monomial dimension");
        let entry = self.terms.entry(exponent).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                rat_to_f64(c)
                    * e.iter()
                        .zip(x)
                        .map(|(&k, &xi)| xi.powi(k as i32))
                        .product::<f64>()
            })
            .sum()
    }

    pub fn eval_exact(&self, x: &RatVec) -> Rat {
        self.terms.iter().fold(Rat::zero(), |acc, (e, c)| {
            let mono = e
                .iter()
                .zip(x.iter())
                .fold(Rat::one(), |m, (&k, xi)| m * num_traits::pow(xi.clone(), k as usize));
            acc + c * mono
        })
    }
}

fn exponent_key(e: &[u32]) -> String {
    e.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<String, String> = self
            .terms
            .iter()
            .map(|(e, c)| (exponent_key(e), format_rat(c)))
            .collect();
        map.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = BTreeMap::<String, RatInput>::deserialize(d)?;
        let mut dim = None;
        let mut terms = BTreeMap::new();
        for (k, v) in raw {
            let e: Vec<u32> = k
                .split(',')
                .map(|t| t.trim().parse::<u32>())
                .collect::<Result<_, _>>()
                .map_err(|_| D::Error::custom(format!("bad monomial exponent {k:?}")))?;
            match dim {
                None => dim = Some(e.len()),
                Some(n) if n != e.len() => {
                    return Err(D::Error::custom("monomials of different dimension"))
                }
                _ => {}
            }
            let c = v.into_rat().map_err(D::Error::custom)?;
            if !c.is_zero() {
                terms.insert(e, c);
            }
        }
        let dim = dim.ok_or_else(|| D::Error::custom("empty polynomial"))?;
        Ok(Polynomial { dim, terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    #[test]
    fn product_of_linear_forms() {
        let p = Polynomial::linear(&RatVec::from_ints(&[1, -1]));
        let q = Polynomial::linear(&RatVec::from_ints(&[0, 2]));
        let pq = p.mul(&q);
        assert_eq!(pq.degree(), 2);
        assert_eq!(pq.eval_exact(&RatVec::from_ints(&[3, 1])), rat(4));
        assert!((pq.eval(&[3.0, 1.0]) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn json_keys() {
        let mut p = Polynomial::zero(2);
        p.add_term(vec![1, 0], ratio(3, 2));
        p.add_term(vec![0, 2], rat(-1));
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"0,2":"-1","1,0":"3/2"}"#);
        let back: Polynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
