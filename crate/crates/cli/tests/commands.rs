use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tempstable"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn relax_grid_and_anchor() {
    let o = run(&["relax", "--lambda", "1", "--rho", "0.5", "--t", "0:5:0.1"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 51);
    let at_one = rows.iter().find(|r| (r[0].parse::<f64>().unwrap() - 1.0).abs() < 1e-12).unwrap();
    let phi: f64 = at_one[1].parse().unwrap();
    assert!((phi - 0.1572992070502851).abs() < 1e-11);
    assert!(text.lines().any(|l| l == "t,phi,phi_ml_form,small_t_asymptote,large_t_asymptote"));
}

#[test]
fn invalid_rho_exits_2_and_names_the_invariant() {
    let o = run(&["relax", "--lambda", "1", "--rho", "1.5", "--t", "0:1:0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rho <= 1"));
    assert!(o.stdout.is_empty());
}

#[test]
fn density_matches_levy_and_reports_normalization() {
    let o = run(&["density", "--alpha", "0.5", "--rho", "1", "--x", "0.05:50:0.25", "--log", "--precision", "17"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for r in data_rows(&text) {
        let (x, h): (f64, f64) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        let levy = x.powf(-1.5) * (-1.0 / (4.0 * x)).exp() / (2.0 * std::f64::consts::PI.sqrt());
        assert!((h - levy).abs() < 1e-10, "{x}");
    }
    let norm: f64 = text.lines().find_map(|l| l.strip_prefix("# normalization: ")).unwrap().parse().unwrap();
    assert!((norm - 1.0).abs() < 1e-8);
}

#[test]
fn nonpositive_density_grid_exits_2() {
    let o = run(&["density", "--alpha", "0.5", "--rho", "1", "--x", "0:1:0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sampling_needs_a_seed_and_is_reproducible() {
    let o = run(&["sample", "--alpha", "0.5", "--rho", "0.5", "--t", "1", "--n", "1000"]);
    assert_eq!(o.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let files: Vec<_> = ["a.csv", "b.csv"].iter().map(|f| dir.path().join(f)).collect();
    for f in &files {
        let o = bin()
            .args(["sample", "--alpha", "0.5", "--rho", "0.5", "--t", "1", "--n", "1000", "--seed", "42", "--out"])
            .arg(f)
            .output()
            .unwrap();
        assert!(o.status.success());
    }
    let a = std::fs::read(&files[0]).unwrap();
    assert_eq!(a, std::fs::read(&files[1]).unwrap());
    assert_eq!(data_rows(&String::from_utf8(a).unwrap()).len(), 1000);
}

#[test]
fn integer_moment_anchor() {
    let o = run(&["moments", "--delta", "1", "--alpha", "0.5", "--rho", "2", "--c", "1", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"][0]["moment"].as_f64(), Some(0.5));
}

#[test]
fn csv_round_trips_to_printed_precision() {
    let o = run(&["moments", "--delta", "0.1,0.2", "--alpha", "0.6", "--rho", "0.7", "--precision", "9"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let p = tempstable::process::ProcessParams::new(0.6, 0.7, 1.0).unwrap();
    for r in data_rows(&text) {
        let d: f64 = r[0].parse().unwrap();
        let m: f64 = r[1].parse().unwrap();
        let exact = tempstable::process::moment(p, d).unwrap();
        assert!((m - exact).abs() <= 1e-8 * exact);
    }
}

#[test]
fn precision_outside_range_is_rejected() {
    let o = run(&["moments", "--delta", "0.1", "--alpha", "0.6", "--rho", "0.7", "--precision", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failure_leaves_no_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("out.csv");
    let o = bin().args(["relax", "--lambda", "-1", "--rho", "0.5", "--t", "0:1:0.5", "--out"]).arg(&f).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(!Path::new(&f).exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn codifference_at_rho_one() {
    let o = run(&["codiff", "--alpha", "0.6", "--rho", "1", "--eta1", "1", "--eta2", "0.5", "--s", "1", "--t", "2:4:1", "--precision", "15"]);
    assert!(o.status.success());
    let expected = 1.0 + 0.5f64.powf(0.6) - 1.5f64.powf(0.6);
    for r in data_rows(&String::from_utf8(o.stdout).unwrap()) {
        assert!((r[1].parse::<f64>().unwrap() - expected).abs() < 1e-12);
    }
}

#[test]
fn verify_all_exits_zero() {
    let o = run(&["verify", "--suite", "all", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.as_array().unwrap().len() > 100);
}

#[test]
fn unknown_suite_exits_2() {
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
}
