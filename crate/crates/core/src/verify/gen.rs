//! Random instances for the suites.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::localize::{FixedPointDatum, FixedPointModel};
use crate::rational::{linalg, RatVec};

pub(crate) fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(salt);
    r
}

pub(crate) fn int_vec(r: &mut ChaCha8Rng, d: usize, lo: i64, hi: i64) -> Vec<i64> {
    (0..d).map(|_| r.gen_range(lo..=hi)).collect()
}

pub(crate) fn nonzero_int_vec(r: &mut ChaCha8Rng, d: usize, lo: i64, hi: i64) -> Vec<i64> {
    loop {
        let v = int_vec(r, d, lo, hi);
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `n` integer vectors of full rank `d`, all positive on a hidden direction.
pub(crate) fn pointed_factors(r: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<RatVec> {
    loop {
        let eta = nonzero_int_vec(r, d, -2, 2);
        let mut fs = Vec::with_capacity(n);
        while fs.len() < n {
            let f = nonzero_int_vec(r, d, -2, 2);
            if f.iter().zip(&eta).map(|(a, b)| a * b).sum::<i64>() > 0 {
                fs.push(RatVec::from_ints(&f));
            }
        }
        if linalg::rank(&fs) == d {
            return fs;
        }
    }
}

/// A point of the open cone `{y : <g, y> > 0}` with some margin, or `None`
/// if the random draws miss.
pub(crate) fn interior_direction(r: &mut ChaCha8Rng, gens: &[Vec<f64>], center: &[f64]) -> Option<Vec<f64>> {
    let cn = norm(center);
    for _ in 0..200 {
        let scale = r.gen_range(0.5..1.5) / cn;
        let y: Vec<f64> = center.iter().map(|c| c * scale + r.gen_range(-0.15..0.15)).collect();
        if gens.iter().all(|g| dot(g, &y) > 0.1 * norm(g) * norm(&y)) {
            return Some(y);
        }
    }
    None
}

/// `x + i y` with `x` uniform in `[-1, 1]^d`.
pub(crate) fn complexify(r: &mut ChaCha8Rng, y: &[f64]) -> Vec<Complex64> {
    y.iter().map(|&im| Complex64::new(r.gen_range(-1.0..1.0), im)).collect()
}

/// Random fixed-point data: weights span at every point, no validity
/// beyond what `validate_model` checks.
pub(crate) fn random_model(r: &mut ChaCha8Rng) -> FixedPointModel {
    loop {
        let d = r.gen_range(1..=3);
        let n = r.gen_range(d..=4);
        let count = r.gen_range(1..=4);
        let mut points = Vec::with_capacity(count);
        for _ in 0..count {
            let image = RatVec::from_ints(&int_vec(r, d, -3, 3));
            let weights = loop {
                let ws: Vec<RatVec> = (0..n).map(|_| RatVec::from_ints(&nonzero_int_vec(r, d, -2, 2))).collect();
                if linalg::rank(&ws) == d {
                    break ws;
                }
            };
            points.push(FixedPointDatum { image, weights });
        }
        if let Ok(m) = FixedPointModel::new(d, n, points, None) {
            return m;
        }
    }
}

/// Non-compact Delzant polygon: a chain of vertices with an unbounded edge
/// at each end. Lies to the left of the chain direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelzantPolygon {
    pub vertices: Vec<[i64; 2]>,
    /// direction of the unbounded edge leaving the first vertex
    pub start: [i64; 2],
    /// direction of the unbounded edge leaving the last vertex
    pub end: [i64; 2],
}

fn sub(a: [i64; 2], b: [i64; 2]) -> [i64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

impl DelzantPolygon {
    pub fn quadrant() -> Self {
        Self { vertices: vec![[0, 0]], start: [0, 1], end: [1, 0] }
    }

    /// Primitive edge directions at vertex `k` and the lattice lengths of
    /// those edges (`None` for the unbounded ones).
    pub fn corner(&self, k: usize) -> ([[i64; 2]; 2], [Option<i64>; 2]) {
        let v = self.vertices[k];
        let side = |other: Option<[i64; 2]>, ray: [i64; 2]| match other {
            None => (ray, None),
            Some(w) => {
                let e = sub(w, v);
                let g = gcd(e[0], e[1]);
                ([e[0] / g, e[1] / g], Some(g))
            }
        };
        let prev = if k == 0 { None } else { Some(self.vertices[k - 1]) };
        let next = self.vertices.get(k + 1).copied();
        let (u1, l1) = side(prev, self.start);
        let (u2, l2) = side(next, self.end);
        ([u1, u2], [l1, l2])
    }

    /// Cuts the corner at vertex `k` at lattice distance `s`; `false` if the
    /// cut would swallow a neighbouring vertex.
    pub fn chop(&mut self, k: usize, s: i64) -> bool {
        let ([u1, u2], lens) = self.corner(k);
        if s < 1 || lens.iter().flatten().any(|&l| s >= l) {
            return false;
        }
        let v = self.vertices[k];
        let a = [v[0] + s * u1[0], v[1] + s * u1[1]];
        let b = [v[0] + s * u2[0], v[1] + s * u2[1]];
        self.vertices.splice(k..=k, [a, b]);
        true
    }

    /// Inward normals and offsets `(n, c)` with the polygon `{<n, x> >= c}`.
    pub fn halfplanes(&self) -> Vec<([f64; 2], f64)> {
        let mut out = Vec::new();
        let mut push = |dir: [i64; 2], p: [i64; 2]| {
            let n = [-dir[1] as f64, dir[0] as f64];
            out.push((n, n[0] * p[0] as f64 + n[1] * p[1] as f64));
        };
        let first = self.vertices[0];
        push([-self.start[0], -self.start[1]], first);
        for w in self.vertices.windows(2) {
            push(sub(w[1], w[0]), w[0]);
        }
        push(self.end, *self.vertices.last().unwrap());
        out
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.halfplanes().iter().all(|(n, c)| n[0] * x[0] + n[1] * x[1] >= *c)
    }

    /// Fixed points at the vertices with the primitive edge vectors as weights.
    pub fn points(&self) -> Vec<FixedPointDatum> {
        (0..self.vertices.len())
            .map(|k| {
                let ([u1, u2], _) = self.corner(k);
                FixedPointDatum {
                    image: RatVec::from_ints(&self.vertices[k]),
                    weights: vec![RatVec::from_ints(&u1), RatVec::from_ints(&u2)],
                }
            })
            .collect()
    }

    pub fn model(&self) -> FixedPointModel {
        FixedPointModel::new(2, 2, self.points(), None).expect("Delzant data is well formed")
    }
}

/// The quadrant with `chops` random corners cut off.
pub fn chopped_quadrant(seed: u64, chops: usize) -> DelzantPolygon {
    let mut r = rng(seed, 0x00de_1a72);
    let mut poly = DelzantPolygon::quadrant();
    let mut done = 0;
    let mut tries = 0;
    while done < chops && tries < 1000 {
        tries += 1;
        let k = r.gen_range(0..poly.vertices.len());
        let s = r.gen_range(1..=3);
        if poly.chop(k, s) {
            done += 1;
        }
    }
    poly
}

/// `P x [-lambda, lambda]`: the polygon times a rotating sphere.
pub(crate) fn with_sphere(p: &DelzantPolygon, lambda: i64) -> FixedPointModel {
    let mut points = Vec::new();
    for pt in p.points() {
        for (h, w) in [(-lambda, 1), (lambda, -1)] {
            let mut image = pt.image.0.clone();
            image.push(crate::rational::rat(h));
            let mut weights: Vec<RatVec> = pt.weights.iter().map(|u| RatVec(lift(u))).collect();
            weights.push(RatVec::from_ints(&[0, 0, w]));
            points.push(FixedPointDatum { image: RatVec(image), weights });
        }
    }
    FixedPointModel::new(3, 3, points, None).expect("product data is well formed")
}

/// `P x [0, inf)`: the polygon times `C` with weight one.
pub(crate) fn with_plane(p: &DelzantPolygon) -> FixedPointModel {
    let points = p
        .points()
        .into_iter()
        .map(|pt| {
            let mut weights: Vec<RatVec> = pt.weights.iter().map(|u| RatVec(lift(u))).collect();
            weights.push(RatVec::from_ints(&[0, 0, 1]));
            FixedPointDatum { image: RatVec(lift(&pt.image)), weights }
        })
        .collect();
    FixedPointModel::new(3, 3, points, None).expect("product data is well formed")
}

fn lift(v: &RatVec) -> Vec<crate::rational::Rat> {
    let mut out = v.0.clone();
    out.push(crate::rational::rat(0));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chopping_keeps_delzant_corners() {
        for seed in 0..20 {
            let p = chopped_quadrant(seed, 4);
            for k in 0..p.vertices.len() {
                let ([u, w], _) = p.corner(k);
                assert_eq!((u[0] * w[1] - u[1] * w[0]).abs(), 1, "{p:?}");
            }
            // the polygon contains points far out along the diagonal
            assert!(p.contains(&[50.0, 50.0]));
            assert!(!p.contains(&[0.1, 0.1]) || p.vertices == vec![[0, 0]]);
        }
    }

    #[test]
    fn single_chop() {
        let mut p = DelzantPolygon::quadrant();
        assert!(p.chop(0, 2));
        assert_eq!(p.vertices, vec![[0, 2], [2, 0]]);
        assert!(!p.chop(0, 2));
        assert!(p.contains(&[1.5, 1.5]) && !p.contains(&[0.5, 0.5]));
    }
}
