use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn localizer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_localizer"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn schema() -> Value {
    let out = localizer(&["--schema"]);
    assert!(out.status.success());
    serde_json::from_slice(&out.stdout).expect("schema is JSON")
}

fn assert_valid(doc_path: &Path) -> Value {
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(doc_path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema()).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(&doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{} fails the schema: {errors:?}", doc_path.display());
    doc
}

fn out_arg(dir: &Path) -> String {
    dir.to_str().unwrap().to_string()
}

#[test]
fn scan_writes_grid_files_that_match_the_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = localizer(&[
        "scan", "--zoo", "two_projection", "--z", "-0.5", "--region", "-2:2^2", "--res", "21", "--out", &out_arg(dir.path()),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["grid.csv", "grid.json", "heatmap.svg"] {
        assert!(dir.path().join(name).exists(), "missing {name}");
    }
    let doc = assert_valid(&dir.path().join("grid.json"));
    assert_eq!(doc["values"].as_array().unwrap().len(), 21 * 21);
    let csv = std::fs::read_to_string(dir.path().join("grid.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "lambda_1,lambda_2,mu_c,mu_q,mu_w,in_zero_set");
    assert_eq!(csv.lines().count(), 21 * 21 + 1);
    let svg = std::fs::read_to_string(dir.path().join("heatmap.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn scans_are_identical_across_worker_counts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (dir, workers) in [(&a, "1"), (&b, "3")] {
        let out = localizer(&[
            "scan", "--zoo", "pauli", "--region", "-1.5:1.5^3", "--res", "9", "--format", "csv", "--workers", workers,
            "--out", &out_arg(dir.path()),
        ]);
        assert!(out.status.success());
    }
    let read = |d: &tempfile::TempDir| std::fs::read(d.path().join("grid.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn universal_pair_scan_marks_the_corners() {
    let dir = tempfile::tempdir().unwrap();
    let out = localizer(&[
        "scan", "--zoo", "universal_pair", "--which", "q", "--region", "-2:2^2", "--res", "41", "--epsilon", "1e-9",
        "--format", "json", "--out", &out_arg(dir.path()),
    ]);
    assert!(out.status.success());
    let doc = assert_valid(&dir.path().join("grid.json"));
    assert_eq!(doc["zero_count"], 4);
}

#[test]
fn slice_locates_the_pauli_sphere() {
    let dir = tempfile::tempdir().unwrap();
    let out = localizer(&[
        "slice", "--zoo", "pauli", "--direction", "1,-2,2", "--t", "0.5:1.5", "--samples", "11", "--bisect", "--out",
        &out_arg(dir.path()),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = assert_valid(&dir.path().join("slice.json"));
    let t = doc["crossing"]["t"].as_f64().unwrap();
    assert!((t - 1.0).abs() < 1e-6);
    assert_eq!(doc["samples"].as_array().unwrap().len(), 11);
}

#[test]
fn curves_for_the_figure_values_of_b() {
    let dir = tempfile::tempdir().unwrap();
    let out = localizer(&[
        "curve", "--b", "0,1,2,2.05", "--z-samples", "41", "--n-trunc", "0", "--out", &out_arg(dir.path()),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for b in ["0.00", "1.00", "2.00", "2.05"] {
        let doc = assert_valid(&dir.path().join(format!("curve_b{b}.json")));
        assert!(dir.path().join(format!("curve_b{b}.svg")).exists());
        assert!(dir.path().join(format!("curve_b{b}.csv")).exists());
        assert_eq!(doc["experimental"], b != "1.00");
    }
    let b0 = assert_valid(&dir.path().join("curve_b0.00.json"));
    assert!(b0["points"]
        .as_array()
        .unwrap()
        .iter()
        .all(|p| p["status"] == "degenerate" && p["z"] == 0.0));
    let b1 = assert_valid(&dir.path().join("curve_b1.00.json"));
    assert!(b1["accepted"].as_u64().unwrap() > 0);
}

#[test]
fn large_b_is_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let out = localizer(&["curve", "--b", "3", "--z-samples", "11", "--n-trunc", "0", "--out", &out_arg(dir.path())]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds 2.25"));
    let doc = assert_valid(&dir.path().join("curve_b3.00.json"));
    assert!(!doc["notes"].as_array().unwrap().is_empty());
}

#[test]
fn suites_pass_and_write_reports() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, file) in [("oracle-check", "oracle-check.json"), ("property-suite", "property-suite.json")] {
        let out = localizer(&[cmd, "--cases", "40", "--seed", "7", "--out", &out_arg(dir.path())]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
        let doc = assert_valid(&dir.path().join(file));
        assert_eq!(doc["passed"], true);
        assert_eq!(doc["seed"], 7);
        assert!(String::from_utf8_lossy(&out.stdout).lines().all(|l| !l.starts_with("FAIL")));
    }
}

#[test]
fn suites_are_deterministic_for_a_seed() {
    let run = || {
        let dir = tempfile::tempdir().unwrap();
        let out = localizer(&["property-suite", "--cases", "25", "--seed", "11", "--out", &out_arg(dir.path())]);
        assert!(out.status.success());
        std::fs::read(dir.path().join("property-suite.json")).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn validation_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["scan", "--zoo", "nope", "--region", "-1:1^2"],
        vec!["scan", "--zoo", "two_projection", "--z", "1.5", "--region", "-1:1^2"],
        vec!["scan", "--zoo", "hemisphere", "--region", "-1:1^2"],
        vec!["scan", "--zoo", "pauli", "--region", "1:-1^3"],
        vec!["scan", "--zoo", "pauli", "--region", "-1:1^3", "--epsilon", "-1"],
        vec!["scan", "--zoo", "pauli", "--region", "-1:1^3", "--format", "png"],
        vec!["scan", "--zoo", "hemisphere", "--n-trunc", "2", "--region", "-1:1^3"],
        vec!["curve", "--b", "-1"],
        vec!["scan"],
    ];
    for mut args in cases {
        let o = out_arg(dir.path());
        args.extend(["--out", &o]);
        let out = localizer(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn schema_flag_prints_the_versioned_schema() {
    let s = schema();
    assert_eq!(s["properties"]["schema_version"]["const"], "1.0.0");
}
