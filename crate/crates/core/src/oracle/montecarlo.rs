//! Empirical pushforward of Lebesgue measure on a ball in `C^n` under
//! `Phi(z) = Phi(0) + sum_i |z_i|^2 / 2 * a_i`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::conespline::sampling::{csv_header, GridAxis};
use crate::conespline::SplineEvaluator;
use crate::polycone::{dual_cone, interior_point, Cone};
use crate::rational::RatVec;

const CHUNK: u64 = 1 << 16;

/// Darboux-coordinate pushforward on `C^n` over the unit-normalized engine
/// density is this constant to the `n`. Measured with [`calibrate`].
pub const DARBOUX_SCALE: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloConfig {
    pub seed: u64,
    pub samples: u64,
    pub cutoff_radius: f64,
}

impl MonteCarloConfig {
    pub fn validate(&self) -> Result<(), OracleError> {
        if self.samples < 10_000 {
            return Err(OracleError::InvalidConfig("need at least 10^4 samples".into()));
        }
        if !(self.cutoff_radius > 0.0 && self.cutoff_radius.is_finite()) {
            return Err(OracleError::InvalidConfig("cutoff radius must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bin {
    pub center: Vec<f64>,
    pub count: u64,
    pub density: f64,
    pub std_error: f64,
    /// the whole preimage of the bin lies inside the sampling ball
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloTable {
    pub weights: Vec<Vec<f64>>,
    pub phi0: Vec<f64>,
    pub config: MonteCarloConfig,
    pub bins: Vec<Bin>,
}

fn unit_ball_volume(dim: usize) -> f64 {
    // V_m = pi^{m/2} / Gamma(m/2 + 1), dim is even here
    let k = dim / 2;
    std::f64::consts::PI.powi(k as i32) / (1..=k).map(|x| x as f64).product::<f64>()
}

/// Histogram of `Phi` over `bins` (each axis `lo:hi:n` is `n` bins).
pub fn montecarlo_pushforward(
    weights: &[RatVec],
    phi0: &[f64],
    bins: &[GridAxis],
    cfg: &MonteCarloConfig,
) -> Result<MonteCarloTable, OracleError> {
    cfg.validate()?;
    let d = phi0.len();
    let n = weights.len();
    if bins.len() != d {
        return Err(OracleError::DimensionMismatch { expected: d, found: bins.len() });
    }
    for w in weights {
        if w.dim() != d {
            return Err(OracleError::DimensionMismatch { expected: d, found: w.dim() });
        }
    }
    if n == 0 || weights.iter().any(RatVec::is_zero) {
        return Err(OracleError::NonProper);
    }
    let cone = Cone::from_generators(d, weights.to_vec())?;
    if !cone.is_pointed()? {
        return Err(OracleError::NonProper);
    }
    let eta = interior_point(&dual_cone(&cone)?)?.to_f64();
    let a: Vec<Vec<f64>> = weights.iter().map(RatVec::to_f64).collect();
    let min_pair = a
        .iter()
        .map(|w| w.iter().zip(&eta).map(|(x, y)| x * y).sum::<f64>())
        .fold(f64::INFINITY, f64::min);

    let widths: Vec<f64> = bins.iter().map(|b| (b.hi - b.lo) / b.n as f64).collect();
    let strides: Vec<usize> = (0..d).map(|j| bins[j + 1..].iter().map(|b| b.n).product()).collect();
    let total_bins: usize = bins.iter().map(|b| b.n).product();
    let radius = cfg.cutoff_radius;

    let chunks = cfg.samples.div_ceil(CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(c);
            let todo = CHUNK.min(cfg.samples - c * CHUNK);
            let mut hist = vec![0u64; total_bins];
            let mut z = vec![0.0f64; 2 * n];
            for _ in 0..todo {
                let mut norm2 = 0.0;
                for x in z.iter_mut() {
                    *x = rng.sample(StandardNormal);
                    norm2 += *x * *x;
                }
                let u: f64 = rng.gen();
                let r = radius * u.powf(1.0 / (2 * n) as f64) / norm2.sqrt();
                let mut idx = 0usize;
                let mut inside = true;
                for j in 0..d {
                    let mut mu = phi0[j];
                    for (i, w) in a.iter().enumerate() {
                        let m2 = (z[2 * i] * r).powi(2) + (z[2 * i + 1] * r).powi(2);
                        mu += 0.5 * m2 * w[j];
                    }
                    let k = ((mu - bins[j].lo) / widths[j]).floor();
                    if k < 0.0 || k >= bins[j].n as f64 {
                        inside = false;
                        break;
                    }
                    idx += k as usize * strides[j];
                }
                if inside {
                    hist[idx] += 1;
                }
            }
            hist
        })
        .reduce(
            || vec![0u64; total_bins],
            |mut x, y| {
                for (a, b) in x.iter_mut().zip(y) {
                    *a += b;
                }
                x
            },
        );

    let ball = unit_ball_volume(2 * n) * radius.powi(2 * n as i32);
    let bin_volume: f64 = widths.iter().product();
    let scale = ball / (cfg.samples as f64 * bin_volume);
    let mut out = Vec::with_capacity(total_bins);
    for (flat, &count) in counts.iter().enumerate() {
        let idx: Vec<usize> = (0..d).map(|j| (flat / strides[j]) % bins[j].n).collect();
        let center: Vec<f64> =
            (0..d).map(|j| bins[j].lo + (idx[j] as f64 + 0.5) * widths[j]).collect();
        // sum |z_i|^2 <= 2 <eta, mu - phi0> / min <eta, a_i> over the fiber
        let reach: f64 = (0..d)
            .map(|j| eta[j] * (center[j] - phi0[j]) + 0.5 * eta[j].abs() * widths[j])
            .sum::<f64>();
        let valid = 2.0 * reach / min_pair <= radius * radius;
        out.push(Bin {
            center,
            count,
            density: count as f64 * scale,
            std_error: (count as f64).sqrt() * scale,
            valid,
        });
    }
    Ok(MonteCarloTable { weights: a, phi0: phi0.to_vec(), config: *cfg, bins: out })
}

impl MonteCarloTable {
    pub fn to_csv(&self) -> String {
        let mut s = csv_header(self.phi0.len());
        s.push('\n');
        for b in &self.bins {
            for x in &b.center {
                s.push_str(&format!("{x},"));
            }
            s.push_str(&format!("{},{:e}\n", b.density, b.std_error));
        }
        s
    }
}

/// Ratio of the empirical density to an engine density over valid bins.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    pub ratio: f64,
    pub ratio_std_error: f64,
    /// `ratio^(1/n)`: the constant per complex dimension
    pub per_dimension: f64,
    pub bins_used: usize,
    /// largest deviation of a bin ratio from the mean, in units of its sigma
    pub max_deviation_sigma: f64,
}

pub fn calibrate(table: &MonteCarloTable, engine: &SplineEvaluator) -> Result<Calibration, OracleError> {
    let mut pairs = Vec::new();
    for b in table.bins.iter().filter(|b| b.valid && b.count > 0) {
        let f = engine.density(&b.center)?.value;
        if f > 0.0 {
            pairs.push((b.density / f, b.std_error / f));
        }
    }
    if pairs.is_empty() {
        return Err(OracleError::InvalidConfig("no valid bins with positive density".into()));
    }
    let wsum: f64 = pairs.iter().map(|(_, s)| 1.0 / (s * s)).sum();
    let ratio = pairs.iter().map(|(r, s)| r / (s * s)).sum::<f64>() / wsum;
    let max_dev = pairs.iter().map(|(r, s)| (r - ratio).abs() / s).fold(0.0, f64::max);
    let n = table.weights.len();
    Ok(Calibration {
        ratio,
        ratio_std_error: wsum.sqrt().recip(),
        per_dimension: ratio.powf(1.0 / n as f64),
        bins_used: pairs.len(),
        max_deviation_sigma: max_dev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(seed: u64) -> MonteCarloConfig {
        MonteCarloConfig { seed, samples: 200_000, cutoff_radius: 2.0 }
    }

    #[test]
    fn deterministic_given_seed() {
        let w = [RatVec::from_ints(&[1])];
        let bins = ["0:2:8".parse().unwrap()];
        let a = montecarlo_pushforward(&w, &[0.0], &bins, &cfg(7)).unwrap();
        let b = montecarlo_pushforward(&w, &[0.0], &bins, &cfg(7)).unwrap();
        assert_eq!(a, b);
        let c = montecarlo_pushforward(&w, &[0.0], &bins, &cfg(8)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn one_dimensional_density_is_two_pi() {
        // |z|^2/2 <= 2 on the radius-2 disc; area 2 pi per unit of mu
        let w = [RatVec::from_ints(&[1])];
        let bins = ["0:2:4".parse().unwrap()];
        let t = montecarlo_pushforward(&w, &[0.0], &bins, &cfg(1)).unwrap();
        for b in &t.bins {
            assert!(b.valid);
            let tau = 2.0 * std::f64::consts::PI;
            assert!((b.density - tau).abs() < 4.0 * b.std_error, "{b:?}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        let bins = ["0:2:4".parse().unwrap()];
        let w = [RatVec::from_ints(&[1]), RatVec::from_ints(&[-1])];
        assert_eq!(
            montecarlo_pushforward(&w, &[0.0], &bins, &cfg(1)),
            Err(OracleError::NonProper)
        );
        let small = MonteCarloConfig { samples: 10, ..cfg(1) };
        assert!(montecarlo_pushforward(&w[..1], &[0.0], &bins, &small).is_err());
    }
}
