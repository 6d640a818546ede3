use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};
use torsionlab::format::{parse_complex, parse_script, script_to_json, to_canonical_string};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn torsionlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torsionlab"))
        .args(args)
        .env_remove("TORSIONLAB_TOL")
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = torsionlab(args);
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), report, String::from_utf8_lossy(&out.stderr).into_owned())
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_identity_cone() {
    let f = fixture("identity_cone.json");
    let (code, report, _) = run(&["verify", path(&f)]);
    assert_eq!(code, 0);
    assert_eq!(report["command"], "verify");
    assert_eq!(report["verdict"], "trivial");
    let digest = hex::encode(Sha256::digest(std::fs::read(&f).unwrap()));
    assert_eq!(report["inputs"][0]["sha256"], digest.as_str());
}

#[test]
fn verify_reports_failing_move() {
    let (code, report, stderr) = run(&["verify", path(&fixture("wrong_slide.json"))]);
    assert_eq!(code, 1);
    assert_eq!(report["verdict"], "move_failed");
    assert_eq!(report["witness"]["index"], 1);
    assert!(stderr.contains("move 1"), "{stderr}");
}

#[test]
fn verify_truncated_json() {
    let (code, report, stderr) = run(&["verify", path(&fixture("truncated.json"))]);
    assert_eq!(code, 3);
    assert_eq!(report["verdict"], "error");
    assert!(stderr.contains("line 20, column 13"), "{stderr}");
}

#[test]
fn verify_missing_file() {
    let (code, _, stderr) = run(&["verify", "/nonexistent/script.json"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("cannot read"));
}

#[test]
fn decide_expansion_is_trivial_with_replayable_script() {
    let (code, report, _) = run(&["decide", path(&fixture("expansion.json"))]);
    assert_eq!(code, 0);
    assert_eq!(report["verdict"], "trivial");
    let script = parse_script(&report["witness"]["script"].to_string()).unwrap();
    assert!(script.verify_trivial().unwrap());
    let original = parse_complex(&std::fs::read_to_string(fixture("expansion.json")).unwrap()).unwrap();
    assert_eq!(script.initial, original);
}

#[test]
fn decide_cyclotomic_unit() {
    let (code, report, _) = run(&["decide", path(&fixture("cyclotomic_z5.json"))]);
    assert_eq!(code, 1);
    assert_eq!(report["verdict"], "nontrivial");
    let j = report["witness"]["character"].as_u64().unwrap();
    assert!((1..5).contains(&j));
    // chi_j(1 - t - t^4) = 1 - 2 cos(2 pi j / 5)
    let expected = (1.0 - 2.0 * (std::f64::consts::TAU * j as f64 / 5.0).cos()).abs().ln();
    let logabs = report["witness"]["logabs"].as_f64().unwrap();
    assert!((logabs - expected).abs() < 1e-9);
    assert!(logabs.abs() > 0.9);
}

#[test]
fn tolerance_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_torsionlab"))
        .args(["decide", path(&fixture("cyclotomic_z5.json"))])
        .env("TORSIONLAB_TOL", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let bad = Command::new(env!("CARGO_BIN_EXE_torsionlab"))
        .args(["decide", path(&fixture("cyclotomic_z5.json"))])
        .env("TORSIONLAB_TOL", "abc")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn decide_not_acyclic() {
    let (code, report, stderr) = run(&["decide", path(&fixture("not_acyclic.json"))]);
    assert_eq!(code, 3);
    assert!(stderr.contains("not acyclic"));
    assert!(report["witness"]["error"].as_str().unwrap().contains("not acyclic"));
}

#[test]
fn cone_then_reduce_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cone = dir.path().join("cone.json");
    let script = dir.path().join("script.json");
    let (code, report, _) = run(&["cone", path(&fixture("identity_map.json")), "--output", path(&cone)]);
    assert_eq!(code, 0);
    assert_eq!(report["verdict"]["acyclic"], true);
    assert_eq!(report["verdict"]["generators"], 4);

    let (code, report, _) = run(&["reduce", path(&cone), "--emit-script", path(&script)]);
    assert_eq!(code, 0);
    assert_eq!(report["verdict"], "emptied");

    let text = std::fs::read_to_string(&script).unwrap();
    let parsed = parse_script(&text).unwrap();
    assert_eq!(to_canonical_string(&script_to_json(&parsed)), text);
    assert_eq!(text, std::fs::read_to_string(fixture("identity_cone.json")).unwrap());
    let (code, _, _) = run(&["verify", path(&script)]);
    assert_eq!(code, 0);
}

#[test]
fn reduce_rejects_non_acyclic() {
    let (code, _, stderr) = run(&["reduce", path(&fixture("not_acyclic.json"))]);
    assert_eq!(code, 3);
    assert!(stderr.contains("not acyclic"));
}

#[test]
fn reports_are_deterministic_up_to_wall_time() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("wall_time_ms");
        v
    };
    let a = run(&["decide", path(&fixture("expansion.json"))]).1;
    let b = run(&["decide", path(&fixture("expansion.json"))]).1;
    assert_eq!(strip(a), strip(b));
}

#[test]
fn lens_classify() {
    let (code, report, _) = run(&["lens", "classify", "7", "1", "2"]);
    assert_eq!(code, 0);
    assert_eq!(report["verdict"]["homotopy_equivalent"], true);
    assert_eq!(report["verdict"]["simple_equivalent"], false);

    let (code, report, _) = run(&["lens", "classify", "7", "1", "1"]);
    assert_eq!(code, 0);
    assert_eq!(report["verdict"]["homotopy_equivalent"], true);
    assert_eq!(report["verdict"]["simple_equivalent"], true);

    let (code, _, _) = run(&["lens", "classify", "7", "1", "0"]);
    assert_eq!(code, 3);
    let (code, _, _) = run(&["lens", "classify", "6", "1", "2"]);
    assert_eq!(code, 3);
}

#[test]
fn lens_table_tsv() {
    let out = torsionlab(&["lens", "table", "7"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n\tq1\tq2\thomotopy_equivalent\tsimple_equivalent\toracle_simple_equivalent"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split('\t').collect()).collect();
    // sum of phi(n)^2 for n = 2..7
    assert_eq!(rows.len(), 1 + 4 + 4 + 16 + 4 + 36);
    assert!(rows.iter().all(|r| r.len() == 6 && r[4] == r[5]));
    assert!(rows.contains(&vec!["7", "1", "2", "true", "false", "false"]));
}

#[test]
fn selftest_passes() {
    let out = torsionlab(&["selftest"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("[FAIL]"));
}
