//! Conversion between halfspace and generator descriptions of a cone.
//!
//! Extreme rays of the pointed part are enumerated by brute force over
//! tight subsets, which is exact and adequate for the small dimensions
//! this crate works in.

use itertools::Itertools;
use num_traits::{Signed, Zero};

use super::PolyconeError;
use crate::rational::{linalg, RatVec};

/// Upper bound on the number of tight subsets examined.
pub const MAX_SUBSETS: usize = 2_000_000;

/// Generators of `{x : <a_i, x> >= 0}`: a lineality basis (to be used with
/// both signs) and the extreme rays of the pointed part.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeGenerators {
    pub lineality: Vec<RatVec>,
    pub rays: Vec<RatVec>,
}

impl ConeGenerators {
    /// All generators with nonnegative coefficients.
    pub fn as_list(&self) -> Vec<RatVec> {
        let mut out: Vec<RatVec> = self.rays.clone();
        for l in &self.lineality {
            out.push(l.clone());
            out.push(-l);
        }
        out
    }
}

pub fn halfspaces_to_generators(
    normals: &[RatVec],
    dim: usize,
) -> Result<ConeGenerators, PolyconeError> {
    let normals: Vec<RatVec> = normals.iter().filter(|n| !n.is_zero()).cloned().collect();
    let lineality = linalg::kernel(&normals, dim);
    let r = dim - lineality.len();
    if r == 0 {
        return Ok(ConeGenerators { lineality, rays: Vec::new() });
    }
    // each extreme ray of the pointed part is cut out by r - 1 independent
    // tight normals inside the orthogonal complement of the lineality space
    let choose = r - 1;
    let n_subsets = binomial(normals.len(), choose);
    if n_subsets > MAX_SUBSETS {
        return Err(PolyconeError::TooLarge(n_subsets));
    }
    if lineality.is_empty() {
        if let Some(rows) = small_integer_rows(&normals) {
            return Ok(ConeGenerators { lineality, rays: integer_rays(&rows, dim) });
        }
    }
    let mut rays: Vec<RatVec> = Vec::new();
    for subset in (0..normals.len()).combinations(choose) {
        let mut rows: Vec<RatVec> = subset.iter().map(|&i| normals[i].clone()).collect();
        rows.extend(lineality.iter().cloned());
        let ker = linalg::kernel(&rows, dim);
        if ker.len() != 1 {
            continue;
        }
        let v = &ker[0];
        let signs: Vec<_> = normals.iter().map(|n| n.dot(v)).collect();
        let candidate = if signs.iter().all(|s| !s.is_negative()) {
            v.clone()
        } else if signs.iter().all(|s| !s.is_positive()) {
            -v
        } else {
            continue;
        };
        if candidate.is_zero() {
            continue;
        }
        let p = candidate.primitive();
        if !rays.contains(&p) {
            rays.push(p);
        }
    }
    rays.sort();
    Ok(ConeGenerators { lineality, rays })
}

/// Entries up to this size keep every minor and dot product inside `i128`.
const SMALL_ENTRY: i64 = 1 << 8;
const SMALL_DIM: usize = 6;

/// Primitive integer forms of the normals, when small enough for the
/// integer path.
fn small_integer_rows(normals: &[RatVec]) -> Option<Vec<Vec<i64>>> {
    if normals.first().is_none_or(|n| n.dim() > SMALL_DIM) {
        return None;
    }
    normals
        .iter()
        .map(|n| {
            n.primitive()
                .iter()
                .map(|x| {
                    let v = x.to_integer();
                    i64::try_from(v).ok().filter(|v| v.abs() <= SMALL_ENTRY)
                })
                .collect()
        })
        .collect()
}

/// Exact determinant by fraction-free elimination.
fn det_i128(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| m[i][k] != 0) else {
            return 0;
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

/// Extreme rays of a pointed cone: the generalized cross product of each
/// `d - 1` normals, kept when every normal is nonnegative on it.
fn integer_rays(rows: &[Vec<i64>], dim: usize) -> Vec<RatVec> {
    let mut rays: Vec<Vec<i64>> = Vec::new();
    for subset in (0..rows.len()).combinations(dim - 1) {
        let mut v: Vec<i128> = (0..dim)
            .map(|j| {
                let minor: Vec<Vec<i128>> = subset
                    .iter()
                    .map(|&i| (0..dim).filter(|&c| c != j).map(|c| rows[i][c] as i128).collect())
                    .collect();
                let d = if minor.is_empty() { 1 } else { det_i128(minor) };
                if j % 2 == 0 { d } else { -d }
            })
            .collect();
        let g = v.iter().fold(0, |a, &b| gcd(a, b));
        if g == 0 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= g);
        let dots: Vec<i128> = rows.iter().map(|r| r.iter().zip(&v).map(|(a, b)| *a as i128 * b).sum()).collect();
        if dots.iter().all(|&x| x <= 0) {
            v.iter_mut().for_each(|x| *x = -*x);
        } else if !dots.iter().all(|&x| x >= 0) {
            continue;
        }
        let p: Vec<i64> = v.iter().map(|&x| x as i64).collect();
        if !rays.contains(&p) {
            rays.push(p);
        }
    }
    let mut out: Vec<RatVec> = rays.iter().map(|r| RatVec::from_ints(r)).collect();
    out.sort();
    out
}

/// Facet normals of `cone(generators)`; the returned normals describe the
/// cone as `{x : <n, x> >= 0}`.
pub fn generators_to_halfspaces(
    generators: &[RatVec],
    dim: usize,
) -> Result<Vec<RatVec>, PolyconeError> {
    // the dual cone {y : <g, y> >= 0} has the facet normals as generators
    let dual = halfspaces_to_generators(generators, dim)?;
    Ok(dual.as_list())
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

pub(crate) fn dedup_rays(vs: &[RatVec]) -> Vec<RatVec> {
    let mut out: Vec<RatVec> = Vec::new();
    for v in vs {
        if v.0.iter().all(Zero::is_zero) {
            continue;
        }
        let p = v.primitive();
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> RatVec {
        RatVec::from_ints(xs)
    }

    #[test]
    fn quadrant_rays() {
        let g = halfspaces_to_generators(&[v(&[1, 0]), v(&[0, 1])], 2).unwrap();
        assert!(g.lineality.is_empty());
        assert_eq!(g.rays, vec![v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn integer_path_matches_rational_path() {
        use rand::{Rng, SeedableRng};
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let d = r.gen_range(2..=4);
            let m = r.gen_range(d..=9);
            let normals: Vec<RatVec> = (0..m)
                .map(|_| RatVec::from_ints(&(0..d).map(|_| r.gen_range(-3..=3)).collect::<Vec<_>>()))
                .filter(|n| !n.is_zero())
                .collect();
            if normals.is_empty() || !linalg::kernel(&normals, d).is_empty() {
                continue;
            }
            let fast = integer_rays(&small_integer_rows(&normals).unwrap(), d);
            // scaling by 1/2 leaves the cone alone but takes the rational path
            let halves: Vec<RatVec> = normals.iter().map(|n| n.scale(&crate::rational::ratio(1, 2))).collect();
            let mut slow: Vec<RatVec> = Vec::new();
            for subset in (0..halves.len()).combinations(d - 1) {
                let rows: Vec<RatVec> = subset.iter().map(|&i| halves[i].clone()).collect();
                let ker = linalg::kernel(&rows, d);
                if ker.len() != 1 {
                    continue;
                }
                let v = &ker[0];
                let s: Vec<_> = halves.iter().map(|n| n.dot(v)).collect();
                let c = if s.iter().all(|x| !x.is_negative()) {
                    v.clone()
                } else if s.iter().all(|x| !x.is_positive()) {
                    -v
                } else {
                    continue;
                };
                let p = c.primitive();
                if !slow.contains(&p) {
                    slow.push(p);
                }
            }
            slow.sort();
            assert_eq!(fast, slow, "{normals:?}");
        }
    }

    #[test]
    fn half_plane_has_lineality() {
        let g = halfspaces_to_generators(&[v(&[1, 0])], 2).unwrap();
        assert_eq!(g.lineality.len(), 1);
        assert_eq!(g.rays, vec![v(&[1, 0])]);
    }

    #[test]
    fn facets_of_generated_cone() {
        let mut normals = generators_to_halfspaces(&[v(&[1, 0]), v(&[1, 1])], 2).unwrap();
        normals.sort();
        assert_eq!(normals, vec![v(&[0, 1]), v(&[1, -1])]);
    }

    #[test]
    fn square_pyramid_has_four_rays() {
        let normals = [v(&[1, 0, 1]), v(&[-1, 0, 1]), v(&[0, 1, 1]), v(&[0, -1, 1])];
        let g = halfspaces_to_generators(&normals, 3).unwrap();
        assert_eq!(g.rays.len(), 4);
        for r in &g.rays {
            assert_eq!(normals.iter().filter(|n| n.dot(r).is_zero()).count(), 2);
        }
    }
}
