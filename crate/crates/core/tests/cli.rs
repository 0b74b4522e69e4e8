use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gup(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gup"))
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .env_remove("GUP_OUT_DIR")
        .output()
        .expect("gup runs")
}

fn stderr_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().last().expect("stderr has a line");
    serde_json::from_str(line).expect("stderr is JSON")
}

#[test]
fn csv_carries_metadata_and_error_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = gup(dir.path(), &["parseval", "--eps", "0,1", "--n", "10,100"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("parseval.csv")).unwrap();
    let meta: Vec<&str> = csv.lines().take_while(|l| l.starts_with('#')).collect();
    assert!(meta
        .iter()
        .any(|l| *l == format!("# version: {}", env!("CARGO_PKG_VERSION"))));
    assert!(meta.contains(&"# experiment: parseval"));
    let hash = meta
        .iter()
        .find_map(|l| l.strip_prefix("# config_hash: "))
        .unwrap();
    assert!(hash.len() == 64 && hash.chars().all(|c| c.is_ascii_hexdigit()));

    let body: Vec<&str> = csv.lines().skip(meta.len()).collect();
    let header: Vec<&str> = body[0].split(',').collect();
    assert!(header.contains(&"error"));
    assert_eq!(body.len(), 1 + 4);
    let sum_col = header.iter().position(|c| *c == "sum").unwrap();
    for row in &body[1..] {
        let cell = row.split(',').nth(sum_col).unwrap();
        let mantissa = cell.split('e').next().unwrap();
        assert_eq!(
            mantissa.trim_start_matches('-').replace('.', "").len(),
            12,
            "{cell}"
        );
    }

    let manifest: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("parseval.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["config_hash"], hash);
    assert_eq!(manifest["config"]["experiment"]["name"], "parseval");
    assert_eq!(manifest["failed_rows"], 0);
    assert!(manifest["error_estimates"]["max_error"].is_number());
}

#[test]
fn json_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = gup(
        dir.path(),
        &["gup", "--state", "maxloc", "--xi", "0", "--format", "json"],
    );
    assert!(out.status.success());
    let doc: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("gup.json")).unwrap())
            .unwrap();
    let row = &doc["rows"][0];
    assert_eq!(row["state"], "max-loc");
    assert_eq!(row["status"], "saturated");
    assert!((row["delta_x"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!(row["delta_x_error"].is_number());
}

#[test]
fn invalid_parameters_exit_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["--beta", "-1", "parseval"][..],
        &["--rel-tol", "0", "symmetry"],
        &["gram", "--n", "5..1"],
        &["gram", "--n", "nonsense"],
        &["vacuum", "--cutoffs", "10,20"],
        &["profiles", "--count", "0"],
        &["no-such-experiment"],
    ] {
        let out = gup(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(stderr_json(&out)["error"], "config", "{args:?}");
    }
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn numerical_failure_exits_with_code_3_and_flags_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = gup(dir.path(), &["--max-subdivisions", "1", "symmetry"]);
    assert_eq!(out.status.code(), Some(3));
    let err = stderr_json(&out);
    assert_eq!(err["error"], "numerical");
    assert!(!err["failures"].as_array().unwrap().is_empty());
    let csv = std::fs::read_to_string(dir.path().join("symmetry.csv")).unwrap();
    assert!(csv.lines().any(|l| l.ends_with(",symmetric")));
    assert!(csv
        .lines()
        .any(|l| l.contains("error: quadrature did not reach tolerance")));
}

#[test]
fn non_normalizable_combination_is_flagged_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let out = gup(dir.path(), &["gram", "--n=-2..2"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("gram.csv")).unwrap();
    let flagged: Vec<&str> = csv
        .lines()
        .filter(|l| l.contains("diverged-as-expected"))
        .collect();
    assert_eq!(flagged.len(), 1);
    assert!(flagged[0].starts_with("kmm-eigen,standard,"));
}

#[test]
fn replay_reproduces_the_table() {
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    let out = gup(
        first.path(),
        &["--beta", "0.5", "ml-overlaps", "--max-separation", "2"],
    );
    assert!(out.status.success());
    let manifest = first.path().join("ml-overlaps.manifest.json");
    let out = gup(second.path(), &["replay", manifest.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let a = std::fs::read(first.path().join("ml-overlaps.csv")).unwrap();
    let b = std::fs::read(second.path().join("ml-overlaps.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn replay_rejects_non_manifests() {
    let dir = tempfile::tempdir().unwrap();
    let bogus = dir.path().join("bogus.json");
    std::fs::write(&bogus, "{\"config\": 3}").unwrap();
    let out = gup(dir.path(), &["replay", bogus.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_gup"))
        .arg("parseval")
        .env("GUP_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("parseval.csv").exists());
}
