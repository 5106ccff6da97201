//! End-to-end CLI checks: exit codes, the pipeline from the spec'd examples,
//! and a golden DOT rendering.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use fibrifier::builders;
use fibrifier::json::{to_canonical_string, CatDoc, DiagramDoc, FunctorDoc};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fibrifier"))
}

fn write_json(dir: &tempfile::TempDir, name: &str, text: String) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn example_2_3_check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_json(
        &dir,
        "f.json",
        to_canonical_string(&FunctorDoc::of(&builders::point_of_iso_pair())),
    );
    let out = run(&["check", f.to_str().unwrap(), "--class", "opfibration"]);
    assert_eq!(exit_code(&out), 1, "{out:?}");
    let out = run(&["check", f.to_str().unwrap(), "--class", "street-opfibration"]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
}

#[test]
fn factorize_then_check_discrete_leg() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_json(
        &dir,
        "f.json",
        to_canonical_string(&FunctorDoc::of(&builders::arrow_to_iso_pair())),
    );
    let fac_path = dir.path().join("fac.json");
    let out = run(&[
        "factorize",
        f.to_str().unwrap(),
        "--comprehensive",
        "--side",
        "opfibration",
        "--out",
        fac_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let fac: serde_json::Value = serde_json::from_str(&fs::read_to_string(&fac_path).unwrap()).unwrap();
    let s = write_json(&dir, "s.json", fac["s"].to_string());
    let out = run(&["check", s.to_str().unwrap(), "--class", "discrete-opfibration"]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
}

#[test]
fn cap_exceeded_is_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let pp = builders::parallel_pair();
    let one = builders::terminal();
    let d0 = fibrifier::cat::FunctorData::constant(&one, &pp, 0);
    let d1 = fibrifier::cat::FunctorData::constant(&one, &pp, 1);
    let cell = fibrifier::cat::NatTransData { from: d0.clone(), to: d1.clone(), component: vec![2] };
    let diag = fibrifier::colim::TwoCellDiagram { apex: one, d0, d1, cell };
    let path = write_json(&dir, "diag.json", to_canonical_string(&DiagramDoc::of(&diag)));
    let out = run(&["coidentify", path.to_str().unwrap(), "--cap", "300"]);
    assert_eq!(exit_code(&out), 3, "{out:?}");
    // Env var sets the default cap.
    let out = bin()
        .args(["coidentify", path.to_str().unwrap()])
        .env("FIBRIFIER_CAP", "300")
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 3, "{out:?}");
}

#[test]
fn malformed_json_is_exit_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_json(&dir, "bad.json", "{\"objects\": 1,".to_string());
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line"), "{stderr}");
}

#[test]
fn validate_reports_violations_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    // Missing composite entry for the arrow with its domain identity.
    let doc = serde_json::json!({
        "objects": 2,
        "morphisms": [[0,0],[1,1],[0,1]],
        "identities": [0,1],
        "compose": [[0,0,0],[1,1,1],[1,2,2]]
    });
    let path = write_json(&dir, "cat.json", doc.to_string());
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("right-unit"), "{stdout}");
}

#[test]
fn export_dot_golden() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_json(&dir, "two.json", to_canonical_string(&CatDoc::of(&builders::arrow())));
    let out = run(&["export-dot", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let expected = "digraph category {\n    o0 [label=\"0\" shape=circle];\n    o1 [label=\"1\" shape=circle];\n    o0 -> o1 [label=\"m2\"];\n}\n";
    assert_eq!(String::from_utf8_lossy(&out.stdout), expected);
}

#[test]
fn corpus_run_reports_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = run(&[
        "corpus",
        "run",
        "--suite",
        "comma-projections",
        "--seed",
        "11",
        "--count",
        "5",
        "--json",
        report.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let parsed: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(parsed["passed"], serde_json::json!(true));
    assert_eq!(parsed["results"].as_array().unwrap().len(), 5);
    let out = run(&["corpus", "run", "--suite", "no-such-suite"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn comma_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let two = builders::arrow();
    let id = fibrifier::cat::FunctorData::identity(&two);
    let f = write_json(&dir, "id.json", to_canonical_string(&FunctorDoc::of(&id)));
    let out = run(&["comma", f.to_str().unwrap(), f.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // Arrow category of 2: three objects, six morphisms.
    assert_eq!(parsed["objects"], serde_json::json!(3));
    assert_eq!(parsed["morphisms"].as_array().unwrap().len(), 6);
    assert_eq!(parsed["decode"].as_array().unwrap().len(), 3);
}
