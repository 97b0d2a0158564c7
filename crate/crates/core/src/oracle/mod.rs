//! Brute-force verifiers that share no code path with the closed-form
//! evaluators: iterated quadrature of Heaviside convolutions, numeric
//! Laplace transforms, Monte-Carlo pushforwards on `C^n`, lattice counts,
//! and the truncated-disc check for `n = 1`.

pub mod circle;
pub mod laplace;
pub mod lattice;
pub mod montecarlo;
pub mod quadrature;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conespline::SplineError;
use crate::polycone::PolyconeError;

pub use circle::{truncated_circle_check, CircleReport};
pub use laplace::{numeric_laplace, numeric_laplace_spline, LaplaceConfig, LaplaceMode, LaplaceValue};
pub use lattice::{lattice_count, LatticeCountConfig};
pub use montecarlo::{calibrate, montecarlo_pushforward, Calibration, MonteCarloConfig, MonteCarloTable, DARBOUX_SCALE};
pub use quadrature::{quadrature_convolution, QuadratureConfig, QuadratureValue};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("quadrature did not converge within depth {0}")]
    DepthExceeded(u32),
    #[error("weight cone is not proper")]
    NonProper,
    #[error("factors do not span the ambient space")]
    Singular,
    #[error("integrand does not decay along a direction of the support")]
    NonDecaying,
    #[error("enumeration bound {0} exceeded")]
    EnumerationBound(u64),
    #[error("truncation level must be positive, got {0}")]
    NonPositiveLevel(f64),
    #[error(transparent)]
    Spline(#[from] SplineError),
    #[error(transparent)]
    Cone(#[from] PolyconeError),
}

/// Complex number as `[re, im]` for reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexDoc(pub [f64; 2]);

impl From<num_complex::Complex64> for ComplexDoc {
    fn from(z: num_complex::Complex64) -> Self {
        ComplexDoc([z.re, z.im])
    }
}
