//! Regular grids and CSV output of sampled densities.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use super::{DensityValue, SplineError, SplineEvaluator};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("bad grid axis {0:?}; expected lo:hi:n")]
    BadAxis(String),
    #[error("grid axis needs at least one point")]
    Empty,
}

/// One axis `lo:hi:n` with `n` equally spaced points including both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl GridAxis {
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n).map(|i| self.lo + step * i as f64).collect()
    }
}

impl FromStr for GridAxis {
    type Err = GridError;
    fn from_str(s: &str) -> Result<Self, GridError> {
        let bad = || GridError::BadAxis(s.to_string());
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(GridError::Empty);
        }
        if !lo.is_finite() || !hi.is_finite() {
            return Err(bad());
        }
        Ok(GridAxis { lo, hi, n })
    }
}

/// Product grid given as comma separated axes, e.g. `-2:2:41,0:1:11`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub axes: Vec<GridAxis>,
}

impl FromStr for Grid {
    type Err = GridError;
    fn from_str(s: &str) -> Result<Self, GridError> {
        let axes = s.split(',').map(str::parse).collect::<Result<Vec<_>, _>>()?;
        Ok(Grid { axes })
    }
}

impl Grid {
    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.n).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in row-major order, last axis fastest.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let coords: Vec<Vec<f64>> = self.axes.iter().map(GridAxis::points).collect();
        let mut out = vec![Vec::new()];
        for c in &coords {
            out = out
                .into_iter()
                .flat_map(|p| {
                    c.iter().map(move |&x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

pub fn sample_grid(
    eval: &SplineEvaluator,
    grid: &Grid,
) -> Result<Vec<(Vec<f64>, DensityValue)>, SplineError> {
    if grid.dim() != eval.dim() {
        return Err(SplineError::DimensionMismatch { expected: eval.dim(), found: grid.dim() });
    }
    grid.points()
        .into_par_iter()
        .map(|p| eval.density(&p).map(|d| (p, d)))
        .collect()
}

pub fn csv_header(dim: usize) -> String {
    let mut cols: Vec<String> = (1..=dim).map(|i| format!("mu_{i}")).collect();
    cols.push("density".into());
    cols.push("error_bound".into());
    cols.join(",")
}

pub fn to_csv(dim: usize, rows: &[(Vec<f64>, DensityValue)]) -> String {
    let mut s = csv_header(dim);
    s.push('\n');
    for (p, d) in rows {
        for x in p {
            write!(s, "{x},").unwrap();
        }
        writeln!(s, "{},{:e}", d.value, d.abs_error_bound).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_grid() {
        let g: Grid = "-1:1:3,0:2:2".parse().unwrap();
        assert_eq!(g.len(), 6);
        let pts = g.points();
        assert_eq!(pts[0], vec![-1.0, 0.0]);
        assert_eq!(pts[1], vec![-1.0, 2.0]);
        assert_eq!(pts[5], vec![1.0, 2.0]);
        assert!("1:2".parse::<Grid>().is_err());
        assert_eq!("0:1:0".parse::<Grid>(), Err(GridError::Empty));
    }

    #[test]
    fn header() {
        assert_eq!(csv_header(2), "mu_1,mu_2,density,error_bound");
    }
}
