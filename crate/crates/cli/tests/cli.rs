use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn predissoc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_predissoc"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .env("PREDISSOC_LOG", "error")
        .output()
        .expect("binary runs")
}

fn manifest(dir: &Path, sub: &str) -> Value {
    let text = std::fs::read_to_string(dir.join(format!("{sub}.manifest.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn default_model_satisfies_the_assumptions() {
    let dir = tempfile::tempdir().unwrap();
    let out = predissoc(&["validate-model"], dir.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let m = manifest(dir.path(), "validate-model");
    assert_eq!(m["checks"]["assumptions"]["passed"], true);
    let csv = std::fs::read_to_string(dir.path().join("assumptions.csv")).unwrap();
    let hash = m["config_hash"].as_str().unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        format!("# predissoc validate-model config {hash}")
    );
    assert!(csv.lines().skip(2).all(|l| l.contains(",true,")));
}

#[test]
fn broken_model_is_rejected_naming_the_clause() {
    let dir = tempfile::tempdir().unwrap();
    // a positive offset on the second channel breaks V2(0) = 0
    std::fs::write(
        dir.path().join("model.json"),
        r#"{"family": "gaussian_tanh", "parameters": {"v2_offset": 0.3}, "domain_box": [-12.0, 18.0]}"#,
    )
    .unwrap();
    std::fs::write(dir.path().join("run.json"), r#"{"model": "model.json"}"#).unwrap();
    let config = dir.path().join("run.json");
    let out = predissoc(
        &["validate-model", "--config", config.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("V2(0)=0"), "{stderr}");
    assert_eq!(
        manifest(dir.path(), "validate-model")["checks"]["assumptions"]["passed"],
        false
    );
}

#[test]
fn invalid_configurations_fail_before_computing() {
    let dir = tempfile::tempdir().unwrap();
    for (body, needle) in [
        (r#"{"theta": 0.5}"#, "theta"),
        (r#"{"h_list": [0.01, 0.02, 0.04]}"#, "decreasing"),
        (r#"{"h_list": [0.04, 0.02]}"#, "at least 3"),
        (r#"{"thetta": 0.2}"#, "unknown field"),
    ] {
        let path = dir.path().join("bad.json");
        std::fs::write(&path, body).unwrap();
        let out = predissoc(
            &["identity", "--config", path.to_str().unwrap()],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(1), "{body}");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains(needle), "{body}: {stderr}");
    }
    let out = predissoc(&["eigen", "--h", "0.04,0.05,0.02"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn identity_holds_to_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let out = predissoc(&["identity"], dir.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let m = manifest(dir.path(), "identity");
    assert_eq!(m["checks"]["a0_identity"]["passed"], true);
    assert_eq!(m["checks"]["a0_identity"]["criterion"], 1);
    assert_eq!(m["checks"]["contour_function"]["passed"], true);
    let csv = std::fs::read_to_string(dir.path().join("a0_identity.csv")).unwrap();
    let worst = csv
        .lines()
        .skip(2)
        .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-7);
    assert!(dir.path().join("identity.gp").exists());
}

#[test]
fn eigen_output_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        let out = predissoc(
            &["eigen", "--h", "0.04,0.03,0.02", "--jobs", "1"],
            dir.path(),
        );
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    for file in ["eigen.csv", "eigen.gp"] {
        let x = std::fs::read(a.path().join(file)).unwrap();
        let y = std::fs::read(b.path().join(file)).unwrap();
        assert_eq!(x, y, "{file}");
    }
    let m = manifest(a.path(), "eigen");
    assert_eq!(m["config"]["h_list"], serde_json::json!([0.04, 0.03, 0.02]));
    let fit = &m["checks"]["bohr_sommerfeld"]["fits"][0];
    assert!(fit["r_squared"].as_f64().unwrap() >= 0.95);
}

#[test]
fn report_collects_every_check() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(predissoc(&["report"], dir.path()).status.code(), Some(1));
    for sub in ["validate-model", "identity"] {
        assert!(predissoc(&[sub], dir.path()).status.success());
    }
    let out = predissoc(&["report"], dir.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(2).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.contains(",PASS,true,")));
    assert!(rows[1].starts_with("1,a0_identity,identity"));
}
