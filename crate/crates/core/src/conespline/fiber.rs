//! Density of `H_{b_1} * ... * H_{b_n}` at a point, as the volume of the
//! fiber polytope `{s >= 0 : B s = mu}` divided by the product of the
//! nonzero singular values of `B`.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};

use super::SplineError;

/// Relative tolerance for feasibility tests inside the fiber.
const FEAS_TOL: f64 = 1e-10;
/// Singular values below `SV_TOL * max` are treated as zero.
const SV_TOL: f64 = 1e-12;

/// Precomputed linear algebra for one factor set.
#[derive(Debug, Clone)]
pub struct FiberKernel {
    dim: usize,
    n: usize,
    /// `B^+`, n x d
    pinv: DMatrix<f64>,
    /// orthonormal basis of `ker B`, n x k
    null: DMatrix<f64>,
    /// projector onto the orthogonal complement of `range B`, d x d
    off_range: DMatrix<f64>,
    /// product of nonzero singular values
    pdet: f64,
    scale: f64,
}

impl FiberKernel {
    /// `factors` are the columns of `B`; properness is the caller's job.
    pub fn new(dim: usize, factors: &[Vec<f64>]) -> Result<Self, SplineError> {
        let n = factors.len();
        for f in factors {
            if f.len() != dim {
                return Err(SplineError::DimensionMismatch { expected: dim, found: f.len() });
            }
            if f.iter().all(|x| *x == 0.0) {
                return Err(SplineError::ZeroFactor);
            }
        }
        if n == 0 {
            return Ok(Self {
                dim,
                n,
                pinv: DMatrix::zeros(0, dim),
                null: DMatrix::zeros(0, 0),
                off_range: DMatrix::identity(dim, dim),
                pdet: 1.0,
                scale: 1.0,
            });
        }
        let b = DMatrix::from_fn(dim, n, |i, j| factors[j][i]);
        let scale = b.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        // SVD of B^T (n x d) gives V for the domain side directly
        let svd = b.transpose().svd(true, true);
        let u = svd.u.as_ref().expect("u requested");
        let v_t = svd.v_t.as_ref().expect("v_t requested");
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let keep: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&i| svd.singular_values[i] > SV_TOL * smax)
            .collect();
        let rank = keep.len();
        let pdet: f64 = keep.iter().map(|&i| svd.singular_values[i]).product();

        // B^T = U S V^T  =>  B = V S U^T, B^+ = U S^-1 V^T
        let mut pinv = DMatrix::zeros(n, dim);
        let mut range_proj = DMatrix::zeros(dim, dim);
        for &i in &keep {
            let ui = u.column(i);
            let vi = v_t.row(i).transpose();
            pinv += (ui * vi.transpose()) / svd.singular_values[i];
            range_proj += &vi * vi.transpose();
        }
        let off_range = DMatrix::identity(dim, dim) - range_proj;

        // ker B = orthogonal complement of range(U restricted to kept columns)
        let null = null_space_complement(u, &keep, n, rank);
        Ok(Self { dim, n, pinv, null, off_range, pdet, scale })
    }

    pub fn fiber_dim(&self) -> usize {
        self.null.ncols()
    }

    pub fn pseudo_det(&self) -> f64 {
        self.pdet
    }

    /// Density at `mu` with an absolute error bound from float accumulation.
    pub fn density(&self, mu: &[f64]) -> Result<(f64, f64), SplineError> {
        if mu.len() != self.dim {
            return Err(SplineError::DimensionMismatch { expected: self.dim, found: mu.len() });
        }
        let mu = DVector::from_column_slice(mu);
        let mu_scale = mu.amax().max(self.scale).max(1.0);
        let off = &self.off_range * &mu;
        if off.amax() > 1e-9 * mu_scale {
            return Err(SplineError::OutsideSpan);
        }
        if self.n == 0 {
            return Ok((1.0, 0.0));
        }
        let s0 = &self.pinv * &mu;
        let k = self.null.ncols();
        let rows: Vec<Vec<f64>> = (0..self.n)
            .map(|i| (0..k).map(|j| self.null[(i, j)]).collect())
            .collect();
        let offsets: Vec<f64> = s0.iter().cloned().collect();
        let tol = FEAS_TOL * (1.0 + s0.amax());
        let (vol, err) = polytope_volume(&rows, &offsets, k, tol);
        if !vol.is_finite() {
            return Err(SplineError::UnboundedFiber);
        }
        Ok((vol / self.pdet, (err + 1e-14 * vol.abs()) / self.pdet))
    }
}

fn null_space_complement(u: &DMatrix<f64>, keep: &[usize], n: usize, rank: usize) -> DMatrix<f64> {
    // U from a thin SVD of an n x d matrix has min(n, d) columns; complete
    // it by Gram-Schmidt against the standard basis.
    let mut basis: Vec<DVector<f64>> = keep.iter().map(|&i| u.column(i).into_owned()).collect();
    let mut null: Vec<DVector<f64>> = Vec::new();
    for e in 0..n {
        if basis.len() == n {
            break;
        }
        let mut v = DVector::zeros(n);
        v[e] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&v);
                v -= b * c;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            v /= norm;
            basis.push(v.clone());
            null.push(v);
        }
    }
    debug_assert_eq!(null.len(), n - rank);
    if null.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&null)
    }
}

/// Volume of `{u in R^k : b_i + <a_i, u> >= 0}` together with an absolute
/// accumulation error estimate. Returns `inf` for unbounded polytopes that
/// are detected (k = 1 only); callers guarantee boundedness otherwise.
pub fn polytope_volume(a: &[Vec<f64>], b: &[f64], k: usize, tol: f64) -> (f64, f64) {
    // normalize rows, drop trivial ones, deduplicate
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::with_capacity(a.len());
    for (ai, &bi) in a.iter().zip(b) {
        let norm = ai.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-12 {
            if bi < -tol {
                return (0.0, 0.0);
            }
            continue;
        }
        let r: Vec<f64> = ai.iter().map(|x| x / norm).collect();
        let c = bi / norm;
        let dup = rows.iter().any(|(rr, cc)| {
            (cc - c).abs() <= tol && rr.iter().zip(&r).all(|(x, y)| (x - y).abs() <= 1e-12)
        });
        if !dup {
            rows.push((r, c));
        }
    }
    if k == 0 {
        return (1.0, 0.0);
    }
    if k == 1 {
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for (r, c) in &rows {
            // c + r u >= 0
            if r[0] > 0.0 {
                lo = lo.max(-c / r[0]);
            } else {
                hi = hi.min(-c / r[0]);
            }
        }
        if lo.is_infinite() || hi.is_infinite() {
            return (f64::INFINITY, 0.0);
        }
        let len = (hi - lo).max(0.0);
        return (len, 4.0 * f64::EPSILON * (lo.abs() + hi.abs()));
    }
    let vertices = enumerate_vertices(&rows, k, tol);
    let Some(v0) = vertices.first() else {
        return (0.0, 0.0);
    };
    let mut vol = 0.0;
    let mut err = 0.0;
    for (j, (aj, bj)) in rows.iter().enumerate() {
        let h = bj + dot(aj, v0);
        if h <= tol {
            continue;
        }
        let q = complement_basis(aj);
        let x0: Vec<f64> = aj.iter().map(|x| -bj * x).collect();
        let mut fa = Vec::with_capacity(rows.len() - 1);
        let mut fb = Vec::with_capacity(rows.len() - 1);
        for (i, (ai, bi)) in rows.iter().enumerate() {
            if i == j {
                continue;
            }
            fa.push(q.iter().map(|col| dot(ai, col)).collect::<Vec<f64>>());
            fb.push(bi + dot(ai, &x0));
        }
        let (fv, fe) = polytope_volume(&fa, &fb, k - 1, tol);
        vol += h * fv / k as f64;
        err += (h * fe + tol * fv) / k as f64 + f64::EPSILON * (h * fv).abs();
    }
    (vol, err)
}

fn enumerate_vertices(rows: &[(Vec<f64>, f64)], k: usize, tol: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for subset in (0..rows.len()).combinations(k) {
        let m = DMatrix::from_fn(k, k, |i, j| rows[subset[i]].0[j]);
        let rhs = DVector::from_fn(k, |i, _| -rows[subset[i]].1);
        let lu = m.lu();
        if lu.determinant().abs() < 1e-10 {
            continue;
        }
        let Some(x) = lu.solve(&rhs) else { continue };
        let x: Vec<f64> = x.iter().cloned().collect();
        if rows.iter().all(|(r, c)| c + dot(r, &x) >= -tol)
            && !out
                .iter()
                .any(|y| y.iter().zip(&x).all(|(p, q)| (p - q).abs() <= 10.0 * tol))
        {
            out.push(x);
        }
    }
    out
}

/// Orthonormal basis of the hyperplane orthogonal to the unit vector `a`.
fn complement_basis(a: &[f64]) -> Vec<Vec<f64>> {
    let k = a.len();
    let mut basis: Vec<Vec<f64>> = vec![a.to_vec()];
    let mut out = Vec::with_capacity(k - 1);
    for e in 0..k {
        if out.len() == k - 1 {
            break;
        }
        let mut v = vec![0.0; k];
        v[e] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &v);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= c * bi;
                }
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v.clone());
            out.push(v);
        }
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
