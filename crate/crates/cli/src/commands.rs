use std::path::Path;

use dhk_core::conespline::sampling::{sample_grid, to_csv, Grid};
use dhk_core::conespline::{spline_laplace, to_f64, SignedConeSpline};
use dhk_core::hermitian::{
    energy_direction, k_type_measure, laplace_nu_symbolic, orbit_model, t_type_measure, OrbitSpec,
};
use dhk_core::localize::{
    dh_measure, gamma_region_for, is_regular, localization_sum, renormalize, support_min, validate_model,
    FixedPointModel,
};
use dhk_core::oracle::{numeric_laplace_spline, LaplaceConfig, LaplaceMode, DARBOUX_SCALE};
use dhk_core::polycone::{
    asymptotic_cone, bounded_below, dual_cone, interior_point, is_compact, is_proper,
    proper_projection_directions, PolyhedralDoc,
};
use dhk_core::rational::{format_rat, parse_rat, RatVec};
use dhk_core::verify::{CriterionReport, Suite};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::{input, internal, read_input, CliError, OutDir};
use crate::Measure;

pub struct Options {
    pub grid: Option<String>,
    pub zeta_samples: usize,
    pub chamber: Option<String>,
    pub seed: u64,
    pub tol: Option<f64>,
}

pub fn parse_vec(s: &str, dim: usize) -> Result<RatVec, CliError> {
    let v = s
        .split(',')
        .map(|x| parse_rat(x.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Input(format!("vector {s:?}: {e}")))?;
    if v.len() != dim {
        return Err(CliError::Input(format!("vector {s:?} has {} coordinates, expected {dim}", v.len())));
    }
    Ok(RatVec(v))
}

fn parse_grid(s: &str, dim: usize) -> Result<Grid, CliError> {
    let g: Grid = s.parse().map_err(|e| CliError::Input(format!("--grid: {e}")))?;
    if g.dim() != dim {
        return Err(CliError::Input(format!("--grid has {} axes, expected {dim}", g.dim())));
    }
    if g.axes.iter().any(|a| a.n < 2) {
        return Err(CliError::Input("--grid needs at least 2 points per axis".into()));
    }
    Ok(g)
}

fn strings(v: &RatVec) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

#[derive(Serialize)]
struct DirectionReport {
    xi: Vec<String>,
    in_dual_cone: bool,
    bounded_below: bool,
    proper_projection: bool,
}

pub fn cones(out: &OutDir, path: &Path, extra: &[String]) -> Result<Value, CliError> {
    let doc = PolyhedralDoc::from_json(&read_input(path)?).map_err(input)?;
    let p = doc.to_polyhedral_set().map_err(input)?;
    let d = p.dim();
    let mut dirs = doc.directions.clone().unwrap_or_default();
    for s in extra {
        dirs.push(parse_vec(s, d)?);
    }
    let proper = is_proper(&p).map_err(input)?;
    let compact = is_compact(&p).map_err(input)?;
    let cone = asymptotic_cone(&p);
    let gens = cone.generator_list().map_err(internal)?;
    let dual = dual_cone(&cone).map_err(internal)?;
    let dual_gens = dual.generator_list().map_err(internal)?;
    let mut directions = Vec::new();
    for xi in &dirs {
        if xi.dim() != d {
            return Err(CliError::Input(format!("direction {xi:?} has the wrong dimension")));
        }
        directions.push(DirectionReport {
            xi: strings(xi),
            in_dual_cone: dual.contains(xi).map_err(internal)?,
            bounded_below: bounded_below(&p, xi).map_err(input)?,
            proper_projection: proper_projection_directions(&p, xi).map_err(input)?,
        });
    }
    let analysis = json!({
        "dim": d,
        "proper": proper,
        "compact": compact,
        "asymptotic_cone": {
            "normals": cone.halfspace_normals().map_err(internal)?.iter().map(strings).collect::<Vec<_>>(),
            "generators": gens.iter().map(strings).collect::<Vec<_>>(),
        },
        "dual_generators": dual_gens.iter().map(strings).collect::<Vec<_>>(),
        "dual_interior_point": interior_point(&dual).ok().map(|x| strings(&x)),
        "directions": directions,
    });
    let file = out.write_json("cones.json", &analysis)?;
    Ok(json!({ "command": "cones", "proper": proper, "compact": compact, "output": file }))
}

/// `Im zeta` near `center`, strictly positive on every generator; real part
/// uniform in `[-1, 1]`.
fn sample_zetas(
    rng: &mut ChaCha8Rng,
    gens: &[Vec<f64>],
    center: &[f64],
    count: usize,
    accept: impl Fn(&[Complex64]) -> bool,
) -> Vec<Vec<Complex64>> {
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let cn = norm(center);
    let mut out = Vec::with_capacity(count);
    let mut tries = 0;
    while out.len() < count && tries < 100 * count.max(1) {
        tries += 1;
        let scale = rng.gen_range(0.5..1.5) / cn;
        let y: Vec<f64> = center.iter().map(|c| c * scale + rng.gen_range(-0.15..0.15)).collect();
        let ok = gens.iter().all(|g| g.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() > 0.1 * norm(g) * norm(&y));
        if !ok {
            continue;
        }
        let z: Vec<Complex64> = y.iter().map(|&im| Complex64::new(rng.gen_range(-1.0..1.0), im)).collect();
        if accept(&z) {
            out.push(z);
        }
    }
    out
}

fn zeta_doc(z: &[Complex64]) -> Vec<[f64; 2]> {
    z.iter().map(|c| [c.re, c.im]).collect()
}

fn write_density(out: &OutDir, name: &str, s: &SignedConeSpline, grid: &Grid) -> Result<usize, CliError> {
    let ev = s.evaluator().map_err(internal)?;
    let rows = sample_grid(&ev, grid).map_err(input)?;
    out.write(name, &to_csv(s.dim(), &rows))?;
    Ok(rows.len())
}

pub fn abelian(out: &OutDir, path: &Path, opts: &Options) -> Result<Value, CliError> {
    let m = FixedPointModel::from_json(&read_input(path)?).map_err(input)?;
    let validation = validate_model(&m).map_err(input)?;
    let xi = match &opts.chamber {
        Some(s) => {
            let v = parse_vec(s, m.dim())?;
            if m.sign_vector(&v).is_none() {
                return Err(CliError::Input(format!("chamber point {s:?} lies on a weight hyperplane")));
            }
            v
        }
        None => validation.xi.clone(),
    };
    let grid = opts.grid.as_deref().map(|g| parse_grid(g, m.dim())).transpose()?;
    let spline = dh_measure(&m, &xi).map_err(input)?;
    let region = gamma_region_for(&renormalize(&m, &xi).map_err(input)?, m.dim()).map_err(input)?;
    out.write("measure.json", &spline.to_json())?;
    let rows = match &grid {
        Some(g) => Some(write_density(out, "density.csv", &spline, g)?),
        None => None,
    };

    let betas: Vec<Vec<f64>> = region.support.generator_list().map_err(internal)?.iter().map(to_f64).collect();
    let center = to_f64(&interior_point(&region.cone).map_err(internal)?);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let zetas = sample_zetas(&mut rng, &betas, &center, opts.zeta_samples, |z| is_regular(&m, z));
    let mut samples = Vec::new();
    let mut worst = 0.0f64;
    for z in &zetas {
        let a = spline_laplace(&spline, z, true).map_err(internal)?;
        let b = localization_sum(&m, z, Some(&region)).map_err(internal)?;
        let dev = (a - b).norm() / b.norm();
        worst = worst.max(dev);
        samples.push(json!({ "zeta": zeta_doc(z), "spline": [a.re, a.im], "localization": [b.re, b.im], "relative_deviation": dev }));
    }
    let tol = opts.tol.unwrap_or(1e-10);
    let n = m.halfdim() as i32;
    let report = json!({
        "xi": strings(&xi),
        "support_min": format_rat(&support_min(&m, &xi).map_err(input)?),
        "gamma_region": {
            "support_generators": betas.iter().collect::<Vec<_>>(),
            "dual_generators": region.cone.generator_list().map_err(internal)?.iter().map(strings).collect::<Vec<_>>(),
        },
        "terms": spline.terms().len(),
        "density_rows": rows,
        "laplace": { "seed": opts.seed, "samples": samples, "max_relative_deviation": worst, "tolerance": tol, "passed": worst <= tol },
        "normalization": normalization(n),
    });
    let file = out.write_json("report.json", &report)?;
    Ok(json!({ "command": "abelian", "laplace_max_relative_deviation": worst, "report": file }))
}

/// The constant between Darboux-coordinate pushforwards and the unit
/// densities emitted here.
fn normalization(n: i32) -> Value {
    json!({
        "liouville_form": "(2 pi)^-n omega^n / n!",
        "darboux_scale_per_complex_dimension": DARBOUX_SCALE,
        "darboux_scale": DARBOUX_SCALE.powi(n),
        "measured_by": "dhk verify montecarlo",
    })
}

pub fn orbit(out: &OutDir, path: &Path, measure: Measure, opts: &Options) -> Result<Value, CliError> {
    let o = OrbitSpec::from_json(&read_input(path)?).map_err(input)?;
    let model = orbit_model(&o).map_err(input)?;
    let d = o.pair.rank;
    let xi = opts.chamber.as_deref().map(|s| parse_vec(s, d)).transpose()?;
    let grid = opts.grid.as_deref().map(|g| parse_grid(g, d)).transpose()?;
    out.write("weyl.json", &o.pair.weyl_json())?;
    let mut report = json!({
        "family": o.pair.family,
        "params": o.pair.params,
        "lambda": strings(&o.lambda),
        "weyl_order": o.pair.weyl.len(),
        "energy_direction": strings(&energy_direction(&o)),
        "fixed_points": model.points().len(),
        "normalization": normalization(o.pair.halfdim() as i32),
    });

    if measure != Measure::K {
        let t = t_type_measure(&o, xi.as_ref()).map_err(input)?;
        out.write("t_measure.json", &t.to_json())?;
        if let Some(g) = &grid {
            write_density(out, "t_density.csv", &t, g)?;
        }
        report["t_type"] = json!({ "terms": t.terms().len() });
    }
    if measure != Measure::T {
        let nu = k_type_measure(&o).map_err(input)?;
        out.write("k_measure.json", &nu.to_json())?;
        if let Some(g) = &grid {
            write_density(out, "k_density.csv", &nu, g)?;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        report["k_type"] = json!({
            "terms": nu.terms().len(),
            "w_invariance": w_invariance(&o, &nu, &mut rng)?,
            "laplace": nu_laplace(&o, &nu, &mut rng, opts)?,
        });
    }
    let file = out.write_json("report.json", &report)?;
    Ok(json!({ "command": "orbit", "weyl_order": o.pair.weyl.len(), "report": file }))
}

fn w_invariance(o: &OrbitSpec, nu: &SignedConeSpline, rng: &mut ChaCha8Rng) -> Result<Value, CliError> {
    let ev = nu.evaluator().map_err(internal)?;
    let weyl: Vec<Vec<Vec<f64>>> = o.pair.weyl.iter().map(|w| w.iter().map(to_f64).collect()).collect();
    let noncompact: Vec<Vec<f64>> = o.pair.noncompact_roots().iter().map(to_f64).collect();
    let (mut worst, mut min) = (0.0f64, f64::INFINITY);
    let points = 100;
    for _ in 0..points {
        let mut mu = to_f64(&o.lambda);
        for a in &noncompact {
            let s: f64 = rng.gen_range(0.0..2.0);
            mu.iter_mut().zip(a).for_each(|(m, x)| *m += s * x);
        }
        mu.iter_mut().for_each(|m| *m += rng.gen_range(-1.0..1.0));
        let v = ev.density_f64(&mu);
        min = min.min(v);
        for w in &weyl {
            let wm: Vec<f64> = w.iter().map(|row| row.iter().zip(&mu).map(|(a, b)| a * b).sum()).collect();
            worst = worst.max((ev.density_f64(&wm) - v).abs());
        }
    }
    Ok(json!({ "points": points, "max_deviation": worst, "min_value": min }))
}

fn nu_laplace(o: &OrbitSpec, nu: &SignedConeSpline, rng: &mut ChaCha8Rng, opts: &Options) -> Result<Value, CliError> {
    let noncompact: Vec<Vec<f64>> = o.pair.noncompact_roots().iter().map(to_f64).collect();
    let center = to_f64(&o.pair.center_vector);
    let zetas = sample_zetas(rng, &noncompact, &center, opts.zeta_samples, |_| true);
    let cfg = LaplaceConfig { mode: LaplaceMode::Cells };
    let mut samples = Vec::new();
    let mut worst = 0.0f64;
    for z in &zetas {
        let s = laplace_nu_symbolic(o, z, true).map_err(internal)?;
        let n = numeric_laplace_spline(nu, z, &cfg).map_err(internal)?;
        let dev = (s - n.value).norm() / s.norm();
        worst = worst.max(dev);
        samples.push(json!({
            "zeta": zeta_doc(z),
            "symbolic": [s.re, s.im],
            "numeric": [n.value.re, n.value.im],
            "numeric_error_bound": n.error_bound,
            "relative_deviation": dev,
        }));
    }
    let tol = opts.tol.unwrap_or(1e-3);
    Ok(json!({ "seed": opts.seed, "samples": samples, "max_relative_deviation": worst, "tolerance": tol, "passed": worst <= tol }))
}

pub fn verify(out: &OutDir, suite: &str, seed: u64) -> Result<Value, CliError> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse().map_err(input)?]
    };
    let mut reports: Vec<CriterionReport> = Vec::new();
    for s in suites {
        log::info!("running suite {}", s.name());
        let r = s.run(seed);
        eprintln!("{r}");
        reports.push(r);
    }
    let file = out.write_json(&format!("verify_{suite}.json"), &reports)?;
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.suite.as_str()).collect();
    if !failed.is_empty() {
        return Err(CliError::Internal(format!("suites failed: {} (report in {})", failed.join(", "), file.display())));
    }
    Ok(json!({ "command": "verify", "suite": suite, "seed": seed, "passed": true, "report": file }))
}
