//! Vector partition counts `#{s in Z^n_{>=0} : sum s_i b_i = t mu}`.

use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::polycone::{dual_cone, interior_point, Cone};
use crate::rational::RatVec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeCountConfig {
    pub scale: u64,
    pub target: Vec<i64>,
    #[serde(default = "default_max_nodes")]
    pub max_nodes: u64,
}

fn default_max_nodes() -> u64 {
    100_000_000
}

impl LatticeCountConfig {
    pub fn new(scale: u64, target: Vec<i64>) -> Self {
        Self { scale, target, max_nodes: default_max_nodes() }
    }
}

struct Walk<'a> {
    weights: &'a [Vec<i64>],
    eta: Vec<i64>,
    nodes: u64,
    max_nodes: u64,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Walk<'_> {
    fn count(&mut self, i: usize, rest: &mut [i64]) -> Result<u64, OracleError> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(OracleError::EnumerationBound(self.max_nodes));
        }
        if i == self.weights.len() {
            return Ok(u64::from(rest.iter().all(|&x| x == 0)));
        }
        let w = &self.weights[i];
        let budget = dot(&self.eta, rest);
        if budget < 0 {
            return Ok(0);
        }
        let top = budget / dot(&self.eta, w);
        if i + 1 == self.weights.len() {
            // the last factor is forced
            let k = (0..rest.len()).find(|&j| w[j] != 0).expect("nonzero weight");
            if rest[k] % w[k] != 0 {
                return Ok(0);
            }
            let s = rest[k] / w[k];
            let ok = s >= 0 && s <= top && rest.iter().zip(w).all(|(r, x)| *r == s * x);
            return Ok(u64::from(ok));
        }
        let mut total = 0;
        for s in 0..=top {
            let mut next: Vec<i64> = rest.iter().zip(w).map(|(r, x)| r - s * x).collect();
            total += self.count(i + 1, &mut next)?;
        }
        Ok(total)
    }
}

pub fn lattice_count(weights: &[Vec<i64>], cfg: &LatticeCountConfig) -> Result<u64, OracleError> {
    let d = cfg.target.len();
    for w in weights {
        if w.len() != d {
            return Err(OracleError::DimensionMismatch { expected: d, found: w.len() });
        }
        if w.iter().all(|&x| x == 0) {
            return Err(OracleError::NonProper);
        }
    }
    if weights.is_empty() {
        return Ok(u64::from(cfg.target.iter().all(|&x| x == 0)));
    }
    let gens: Vec<RatVec> = weights.iter().map(|w| RatVec::from_ints(w)).collect();
    let cone = Cone::from_generators(d, gens)?;
    if !cone.is_pointed()? {
        return Err(OracleError::NonProper);
    }
    // integral functional, positive on every weight
    let eta = interior_point(&dual_cone(&cone)?)?;
    let eta = eta.primitive();
    let eta: Vec<i64> = eta
        .iter()
        .map(|x| i64::try_from(x.to_integer()).map_err(|_| OracleError::InvalidConfig("functional too large".into())))
        .collect::<Result<_, _>>()?;
    let t = i64::try_from(cfg.scale).map_err(|_| OracleError::InvalidConfig("scale too large".into()))?;
    let mut rest: Vec<i64> = cfg.target.iter().map(|m| m * t).collect();
    let mut walk = Walk { weights, eta, nodes: 0, max_nodes: cfg.max_nodes };
    walk.count(0, &mut rest)
}
