//! Seeded randomized suites behind the acceptance test and `dhk verify`.
//! Each suite returns a [`CriterionReport`] with its measured deviations.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

mod abelian;
mod cones;
mod convolution;
mod gen;
mod montecarlo;
mod orbits;

pub use abelian::{chamber_suite, localization_suite, sphere_suite};
pub use cones::cone_suite;
pub use convolution::{fiber_suite, laplace_suite};
pub use gen::{chopped_quadrant, DelzantPolygon};
pub use montecarlo::{circle_suite, lattice_suite, montecarlo_suite};
pub use orbits::orbit_suite;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseFailure {
    pub case: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub suite: String,
    pub title: String,
    pub seed: u64,
    pub cases: usize,
    pub failures: Vec<CaseFailure>,
    /// largest deviation measured, in the units of `tolerance`
    pub worst: f64,
    pub tolerance: f64,
    pub elapsed_secs: f64,
    pub budget_secs: f64,
    /// suite-specific measurements (calibration constants, resolved signs)
    pub notes: Vec<String>,
    pub passed: bool,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {} {}: {}/{} cases, worst {:.3e} (tol {:.1e}), {:.2}s (budget {}s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.cases - self.failures.len().min(self.cases),
            self.cases,
            self.worst,
            self.tolerance,
            self.elapsed_secs,
            self.budget_secs
        )
    }
}

/// Accumulates per-case outcomes while a suite runs.
pub(crate) struct Tally {
    id: u8,
    suite: &'static str,
    title: &'static str,
    seed: u64,
    tolerance: f64,
    budget_secs: f64,
    start: Instant,
    cases: usize,
    worst: f64,
    failures: Vec<CaseFailure>,
    notes: Vec<String>,
}

impl Tally {
    pub(crate) fn new(id: u8, suite: &'static str, title: &'static str, seed: u64, tolerance: f64, budget_secs: f64) -> Self {
        Self {
            id,
            suite,
            title,
            seed,
            tolerance,
            budget_secs,
            start: Instant::now(),
            cases: 0,
            worst: 0.0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Records one case with its deviation; fails when above tolerance or NaN.
    pub(crate) fn measure(&mut self, deviation: f64, what: impl FnOnce() -> String) {
        let case = self.cases;
        self.cases += 1;
        if deviation.is_nan() || deviation > self.tolerance {
            self.failures.push(CaseFailure { case, message: format!("{} (deviation {deviation:.3e})", what()) });
        }
        if deviation.is_nan() {
            self.worst = f64::INFINITY;
        } else {
            self.worst = self.worst.max(deviation);
        }
    }

    /// For suites with several tolerances: records `deviation / tol`
    /// against a unit tolerance.
    pub(crate) fn measure_against(&mut self, deviation: f64, tol: f64, what: impl FnOnce() -> String) {
        self.measure(deviation / tol, what)
    }

    /// Records a case whose outcome is a plain yes/no.
    pub(crate) fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        let case = self.cases;
        self.cases += 1;
        if !ok {
            self.failures.push(CaseFailure { case, message: what() });
        }
    }

    pub(crate) fn fail(&mut self, message: String) {
        let case = self.cases;
        self.cases += 1;
        self.failures.push(CaseFailure { case, message });
    }

    pub(crate) fn note(&mut self, s: String) {
        self.notes.push(s);
    }

    pub(crate) fn finish(self) -> CriterionReport {
        let elapsed_secs = self.start.elapsed().as_secs_f64();
        let passed = self.failures.is_empty() && self.cases > 0 && elapsed_secs < self.budget_secs;
        CriterionReport {
            id: self.id,
            suite: self.suite.to_string(),
            title: self.title.to_string(),
            seed: self.seed,
            cases: self.cases,
            failures: self.failures,
            worst: self.worst,
            tolerance: self.tolerance,
            elapsed_secs,
            budget_secs: self.budget_secs,
            notes: self.notes,
            passed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Cones,
    Laplace,
    Localization,
    Chambers,
    Convolution,
    MonteCarlo,
    Sphere,
    Orbits,
    Lattice,
    Circle,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Cones,
        Suite::Laplace,
        Suite::Localization,
        Suite::Chambers,
        Suite::Convolution,
        Suite::MonteCarlo,
        Suite::Sphere,
        Suite::Orbits,
        Suite::Lattice,
        Suite::Circle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Cones => "cones",
            Suite::Laplace => "laplace",
            Suite::Localization => "localization",
            Suite::Chambers => "chambers",
            Suite::Convolution => "convolution",
            Suite::MonteCarlo => "montecarlo",
            Suite::Sphere => "sphere",
            Suite::Orbits => "orbits",
            Suite::Lattice => "lattice",
            Suite::Circle => "circle",
        }
    }

    pub fn run(self, seed: u64) -> CriterionReport {
        match self {
            Suite::Cones => cone_suite(seed),
            Suite::Laplace => laplace_suite(seed),
            Suite::Localization => localization_suite(seed),
            Suite::Chambers => chamber_suite(seed),
            Suite::Convolution => fiber_suite(seed),
            Suite::MonteCarlo => montecarlo_suite(seed),
            Suite::Sphere => sphere_suite(seed),
            Suite::Orbits => orbit_suite(seed),
            Suite::Lattice => lattice_suite(seed),
            Suite::Circle => circle_suite(seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownSuite(pub String);

impl fmt::Display for UnknownSuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        write!(f, "unknown suite '{}' (expected one of: {}, all)", self.0, names.join(", "))
    }
}

impl std::error::Error for UnknownSuite {}

impl FromStr for Suite {
    type Err = UnknownSuite;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

/// Runs every suite in criterion order.
pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    Suite::ALL.iter().map(|s| s.run(seed)).collect()
}
