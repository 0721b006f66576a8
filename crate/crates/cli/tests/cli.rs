//! End-to-end tests of the command-line interface, driving the built binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn se3sr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_se3sr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

/// Parse our CSV output into (header, rows).
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines
        .next()
        .expect("header row")
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|line| {
            line.split(',')
                .map(|cell| cell.parse::<f64>().expect("numeric cell"))
                .collect()
        })
        .collect();
    (header, rows)
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("se3sr-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).expect("scratch dir");
    dir
}

#[test]
fn controls_straight_line() {
    let out = se3sr(&["controls", "--u0", "0,0,1,0,0", "--t1", "1", "--samples", "3"]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout_str(&out));
    assert_eq!(header, ["t", "u1", "u2", "u3", "u4", "u5", "U", "H", "W"]);
    assert_eq!(rows.len(), 3);
    for row in &rows {
        assert_eq!(row[3], 1.0); // u3
        assert_eq!(row[6], row[0]); // U = t
        assert_eq!((row[1], row[2], row[4], row[5]), (0.0, 0.0, 0.0, 0.0));
        assert_eq!(row[7], 0.5); // H
    }
    assert_eq!(rows[2][0], 1.0);
}

#[test]
fn controls_first_row_reproduces_input_exactly() {
    let out = se3sr(&[
        "controls",
        "--u0",
        "0.1,-0.2,0.3,0.7,-0.9",
        "--t1",
        "2",
        "--samples",
        "5",
    ]);
    assert!(out.status.success());
    let (_, rows) = parse_csv(&stdout_str(&out));
    assert_eq!(rows[0][..6], [0.0, 0.1, -0.2, 0.3, 0.7, -0.9]);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["controls"],                                  // missing --u0
        vec!["controls", "--u0", "1,2,3"],                 // wrong arity
        vec!["controls", "--u0", "1,2,3,4,x"],             // non-numeric
        vec!["controls", "--u0", "0,0,1,0,0", "--t1", "0"] as Vec<&str>, // t1 <= 0
        vec!["controls", "--u0", "0,0,1,0,0", "--samples", "1"],
        vec!["geodesic", "--u0", "0,0,1,0,0", "--backend", "quaternion"],
        vec!["no-such-command"],
    ] {
        let out = se3sr(&args);
        assert_eq!(out.status.code(), Some(2), "args: {args:?}");
    }
}

#[test]
fn nonzero_u6_exits_3() {
    let out = se3sr(&["controls", "--u0", "1,2,3,4,5,0.5"]);
    assert_eq!(out.status.code(), Some(3));
    // an explicit zero u6 is the supported slice and is accepted
    let out = se3sr(&["controls", "--u0", "1,2,3,4,5,0", "--samples", "2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn chart_singularity_exits_4_and_names_the_time() {
    let out = se3sr(&[
        "geodesic",
        "--u0",
        "0,0,0,0,1",
        "--t1",
        "2",
        "--backend",
        "angles",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("t = 1.57"), "stderr: {err}");
    // the matrix backend integrates the same momentum without complaint
    let out = se3sr(&[
        "geodesic",
        "--u0",
        "0,0,0,0,1",
        "--t1",
        "2",
        "--backend",
        "matrix",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn geodesic_straight_line_moves_along_z() {
    let out = se3sr(&["geodesic", "--u0", "0,0,1,0,0", "--t1", "1", "--samples", "11"]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout_str(&out));
    assert_eq!(header[0..7], ["t", "x", "y", "z", "theta", "beta", "alpha"]);
    // first row is the identity pose
    assert_eq!(rows[0][1..7], [0.0; 6]);
    for row in &rows {
        assert!((row[3] - row[0]).abs() < 1e-12, "z should equal t");
        assert!(row[1].abs() < 1e-14 && row[2].abs() < 1e-14);
    }
}

#[test]
fn geodesic_backends_agree() {
    let run = |backend: &str| {
        let out = se3sr(&[
            "geodesic",
            "--u0",
            "0.3,-0.7,0.9,0.3,-0.2",
            "--t1",
            "5",
            "--samples",
            "51",
            "--backend",
            backend,
        ]);
        assert!(out.status.success());
        parse_csv(&stdout_str(&out)).1
    };
    let a = run("angles");
    let b = run("matrix");
    for (ra, rb) in a.iter().zip(&b) {
        for (va, vb) in ra.iter().zip(rb) {
            assert!((va - vb).abs() < 1e-7);
        }
    }
}

#[test]
fn geodesic_invariant_columns_are_constant() {
    let out = se3sr(&["geodesic", "--u0", "1,1,1,1,1", "--t1", "10", "--samples", "101"]);
    assert!(out.status.success());
    let (_, rows) = parse_csv(&stdout_str(&out));
    for col in 12..15 {
        let first = rows[0][col];
        for row in &rows {
            assert!((row[col] - first).abs() < 1e-7, "rho drift in column {col}");
        }
    }
}

#[test]
fn case_info_reports_derived_constants() {
    let out = se3sr(&["case-info", "--u0", "-1,2,0.5,2,1"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(doc["case"], "I");
    assert_eq!(doc["A"], 0.0);

    let out = se3sr(&["case-info", "--u0", "1,1,1,1,1"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(doc["case"], "III");
    let k = doc["k"].as_f64().unwrap();
    assert!((k - 0.4472135955).abs() < 1e-9);

    let out = se3sr(&["case-info", "--u0", "0,0,0,0,0"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(doc["case"], "TRIVIAL");
    assert_eq!(doc["k"], serde_json::Value::Null);
}

#[test]
fn check_passes_on_straight_line_and_fails_on_absurd_tolerance() {
    let out = se3sr(&["check", "--u0", "0,0,1,0,0", "--t1", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout_str(&out));
    assert!(stdout_str(&out).contains("PASS"));

    let out = se3sr(&["check", "--u0", "0,0,1,0,0", "--t1", "5", "--tol", "1e-18"]);
    assert_eq!(out.status.code(), Some(5));
    // the report still prints before the failing exit
    assert!(stdout_str(&out).contains("max |closed-form"));
    assert!(stdout_str(&out).contains("FAIL"));
}

#[test]
fn sweep_writes_files_and_manifest() {
    let dir = scratch_dir("sweep");
    let out = se3sr(&[
        "sweep",
        "--u0",
        "1,1,0,1,1",
        "--component",
        "3",
        "--start",
        "0",
        "--stop",
        "1",
        "--count",
        "3",
        "--t1",
        "1",
        "--samples",
        "20",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    let entries = manifest["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 3);
    let mut last_k = -1.0;
    for entry in entries {
        assert_eq!(entry["case"], "III");
        let file = dir.join(entry["file"].as_str().unwrap());
        assert!(file.exists(), "{file:?} missing");
        // A = B is fixed along this sweep, so k grows strictly with |u3(0)|
        let k = entry["k"].as_f64().unwrap();
        assert!(k > last_k, "k not increasing: {k} after {last_k}");
        last_k = k;
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn sweep_with_count_one_matches_geodesic_output() {
    let dir = scratch_dir("sweep1");
    let out = se3sr(&[
        "sweep",
        "--u0",
        "0,0,1,0,0",
        "--component",
        "3",
        "--start",
        "1",
        "--stop",
        "9",
        "--count",
        "1",
        "--t1",
        "1",
        "--samples",
        "5",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let swept = std::fs::read_to_string(dir.join("u3_000.csv")).unwrap();
    let direct = se3sr(&["geodesic", "--u0", "0,0,1,0,0", "--t1", "1", "--samples", "5"]);
    assert_eq!(swept, stdout_str(&direct));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn sweep_rejects_malformed_ranges() {
    let dir = scratch_dir("sweep-bad");
    for (component, count) in [("0", "3"), ("6", "3"), ("3", "0")] {
        let out = se3sr(&[
            "sweep",
            "--u0",
            "1,1,0,1,1",
            "--component",
            component,
            "--start",
            "0",
            "--stop",
            "1",
            "--count",
            count,
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(2));
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn json_output_carries_meta_columns_rows() {
    let out = se3sr(&[
        "controls",
        "--u0",
        "1,1,1,1,1",
        "--t1",
        "1",
        "--samples",
        "4",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(doc["meta"]["case_params"]["case"], "III");
    assert_eq!(doc["columns"].as_array().unwrap().len(), 9);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 4);
}
