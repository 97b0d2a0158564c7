use std::fs;
use std::path::Path;

use assert_cmd::Command;
use serde_json::Value;
use tempfile::TempDir;

fn dhk(dir: &Path) -> Command {
    let mut c = Command::cargo_bin("dhk").unwrap();
    c.arg("--out").arg(dir.join("out"));
    c
}

fn input(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn json(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("out").join(name)).unwrap()).unwrap()
}

fn stderr(o: &std::process::Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SPHERE: &str = r#"{"dim":1,"halfdim":1,"points":[
    {"image":["-1"],"weights":[["1"]]},
    {"image":["1"],"weights":[["-1"]]}]}"#;

#[test]
fn quadrant_is_proper_with_unit_dual_generators() {
    let t = TempDir::new().unwrap();
    let f = input(t.path(), "q.json", r#"{"dim":2,"halfspaces":[{"normal":["1","0"]},{"normal":["0","1"]}]}"#);
    dhk(t.path()).args(["cones", "--input", &f, "--xi", "1,1"]).assert().success();
    let c = json(t.path(), "cones.json");
    assert_eq!(c["proper"], true);
    assert_eq!(c["compact"], false);
    let dual = c["dual_generators"].as_array().unwrap();
    assert_eq!(dual.len(), 2);
    assert!(dual.contains(&serde_json::json!(["1", "0"])));
    assert!(dual.contains(&serde_json::json!(["0", "1"])));
}

#[test]
fn half_plane_is_not_proper_and_box_is_compact() {
    let t = TempDir::new().unwrap();
    let f = input(t.path(), "h.json", r#"{"dim":2,"halfspaces":[{"normal":["0","1"]}]}"#);
    dhk(t.path()).args(["cones", "--input", &f]).assert().success();
    assert_eq!(json(t.path(), "cones.json")["proper"], false);

    let f = input(
        t.path(),
        "b.json",
        r#"{"dim":2,"halfspaces":[{"normal":["1","0"]},{"normal":["-1","0"],"offset":"-1"},
            {"normal":["0","1"]},{"normal":["0","-1"],"offset":"-2"}]}"#,
    );
    dhk(t.path()).args(["cones", "--input", &f]).assert().success();
    let c = json(t.path(), "cones.json");
    assert_eq!(c["compact"], true);
    assert_eq!(c["proper"], true);
}

#[test]
fn sphere_density_is_flat_and_transform_agrees() {
    let t = TempDir::new().unwrap();
    let f = input(t.path(), "s.json", SPHERE);
    dhk(t.path()).args(["abelian", "--input", &f, "--grid", "-1.5:1.5:7"]).assert().success();
    let csv = fs::read_to_string(t.path().join("out/density.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("mu_1,density,error_bound"));
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let expect = if (-1.0..1.0).contains(&cols[0]) { 1.0 } else { 0.0 };
        assert!((cols[1] - expect).abs() < 1e-12, "{line}");
    }
    let report = json(t.path(), "report.json");
    assert!(report["laplace"]["max_relative_deviation"].as_f64().unwrap() < 1e-10);
    assert_eq!(report["laplace"]["passed"], true);
}

#[test]
fn spline_json_is_readable_back() {
    let t = TempDir::new().unwrap();
    let f = input(t.path(), "s.json", SPHERE);
    dhk(t.path()).args(["abelian", "--input", &f]).assert().success();
    let text = fs::read_to_string(t.path().join("out/measure.json")).unwrap();
    let s = dhk_core::conespline::SignedConeSpline::from_json(&text).unwrap();
    assert_eq!(s.terms().len(), 2);
}

#[test]
fn non_proper_model_exits_2() {
    let t = TempDir::new().unwrap();
    let f = input(
        t.path(),
        "np.json",
        r#"{"dim":2,"halfdim":2,"points":[
            {"image":["0","0"],"weights":[["1","0"],["0","1"]]},
            {"image":["1","0"],"weights":[["1","-1"],["-1","1"]]}]}"#,
    );
    let o = dhk(t.path()).args(["abelian", "--input", &f]).assert().code(2).get_output().clone();
    assert!(stderr(&o).contains("no proper renormalization"));
}

#[test]
fn chamber_on_a_wall_exits_2() {
    let t = TempDir::new().unwrap();
    let f = input(t.path(), "s.json", SPHERE);
    dhk(t.path()).args(["abelian", "--input", &f, "--chamber", "0"]).assert().code(2);
}

#[test]
fn su11_orbit_has_half_line_densities() {
    let t = TempDir::new().unwrap();
    let f = input(t.path(), "o.json", r#"{"family":"AIII","params":[1,1],"lambda":["1","-1"]}"#);
    dhk(t.path()).args(["orbit", "--input", &f, "--grid", "0:4:5"]).assert().success();
    let csv = fs::read_to_string(t.path().join("out/k_density.csv")).unwrap();
    let dens: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(dens[..2], [0.0, 0.0]);
    assert!(dens[2..].iter().all(|&x| (x - dens[2]).abs() < 1e-12 && x > 0.0));
    let report = json(t.path(), "report.json");
    assert_eq!(report["weyl_order"], 1);
    assert_eq!(report["k_type"]["laplace"]["passed"], true);
}

#[test]
fn su21_orbit_is_weyl_invariant() {
    let t = TempDir::new().unwrap();
    let f = input(t.path(), "o.json", r#"{"family":"AIII","params":[2,1],"lambda":["3","1","-4"]}"#);
    dhk(t.path()).args(["orbit", "--input", &f, "--measure", "k"]).assert().success();
    let report = json(t.path(), "report.json");
    assert_eq!(report["weyl_order"], 2);
    assert!(report["k_type"]["w_invariance"]["max_deviation"].as_f64().unwrap() < 1e-9);
    assert_eq!(report["k_type"]["laplace"]["passed"], true);
    assert!(!t.path().join("out/t_measure.json").exists());
}

#[test]
fn singular_lambda_exits_2_naming_p() {
    let t = TempDir::new().unwrap();
    let f = input(t.path(), "o.json", r#"{"family":"AIII","params":[2,1],"lambda":["1","1","-2"]}"#);
    let o = dhk(t.path()).args(["orbit", "--input", &f]).assert().code(2).get_output().clone();
    assert!(stderr(&o).contains("P(lambda) = 0"));
}

#[test]
fn verify_circle_passes() {
    let t = TempDir::new().unwrap();
    dhk(t.path()).args(["verify", "circle"]).assert().success();
    let r = json(t.path(), "verify_circle.json");
    assert_eq!(r[0]["passed"], true);
}

#[test]
fn verify_montecarlo_is_reproducible() {
    let run = || {
        let t = TempDir::new().unwrap();
        dhk(t.path()).args(["--seed", "7", "verify", "montecarlo"]).assert().success();
        let mut r = json(t.path(), "verify_montecarlo.json");
        r[0]["elapsed_secs"] = Value::Null;
        r
    };
    assert_eq!(run(), run());
}

#[test]
fn unknown_suite_and_missing_file_exit_2() {
    let t = TempDir::new().unwrap();
    dhk(t.path()).args(["verify", "nope"]).assert().code(2);
    dhk(t.path()).args(["cones", "--input", "/nonexistent/x.json"]).assert().code(2);
}
