//! Exit-code contract and IO behavior of the fordom binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fordom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fordom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated normally")
}

fn write_doc(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const OVERLAPPING_DOC: &str = r#"{
    "t_alpha": [100.0, 0.0],
    "t_beta": [0.0, 100.0],
    "gammas": [
        [[0.0, 0.0], [1.0, 0.0], [-1.0, 0.0], [5.0, 0.0]],
        [[-1.0, 0.0], [7.0, 0.0], [-1.0, 0.0], [6.0, 0.0]]
    ]
}"#;

const TANGENT_DOC: &str = r#"{
    "t_alpha": [100.0, 0.0],
    "t_beta": [0.0, 100.0],
    "gammas": [
        [[0.0, 0.0], [1.0, 0.0], [-1.0, 0.0], [5.0, 0.0]],
        [[-2.0, 0.0], [15.0, 0.0], [-1.0, 0.0], [7.0, 0.0]]
    ]
}"#;

const SHORT_LATTICE_DOC: &str = r#"{
    "t_alpha": [0.5, 0.0],
    "t_beta": [0.0, 0.5],
    "gammas": [
        [[0.0, 0.0], [1.0, 0.0], [-1.0, 0.0], [5.0, 0.0]],
        [[-10.0, 0.0], [151.0, 0.0], [-1.0, 0.0], [15.0, 0.0]]
    ]
}"#;

#[test]
fn find_t0_reports_the_crossing_parameter() {
    let out = fordom(&["find-t0", "--example", "prop42", "--k", "1"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("command = find-t0"));
    assert!(text.contains("t0 = 2\n"), "got:\n{text}");
    assert!(text.contains("betweenness = true"));
}

#[test]
fn find_t0_without_sign_change_exits_4() {
    let out = fordom(&["find-t0", "--example", "prop42", "--interval", "0", "1"]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("sign"));
}

#[test]
fn check_simple_on_the_builtin_example_exits_0() {
    let out = fordom(&["check-simple", "--example", "simple-ford"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("verdict = simple"));
    assert!(text.contains("min_gap = 3\n"), "got:\n{text}");
}

#[test]
fn overlapping_spheres_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(&dir, "overlap.json", OVERLAPPING_DOC);
    let out = fordom(&["check-simple", "--rep", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("verdict = not_simple"));
    assert!(text.contains("witness.relation = overlapping"));
}

#[test]
fn tangent_spheres_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(&dir, "tangent.json", TANGENT_DOC);
    let out = fordom(&["check-simple", "--rep", path.to_str().unwrap()]);
    assert_eq!(code(&out), 3, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("verdict = uncertain"));
    assert!(text.contains("min_gap = 0\n"), "got:\n{text}");
}

#[test]
fn short_lattice_raises_the_alarm_and_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(&dir, "short.json", SHORT_LATTICE_DOC);
    let out = fordom(&["alarm", "--rep", path.to_str().unwrap()]);
    assert_eq!(code(&out), 5, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("alarm = true"));
    assert!(text.contains("threshold = 0.5\n"));
    assert!(!text.contains("offenders = 0\n"));
}

#[test]
fn malformed_and_invalid_documents_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let truncated = write_doc(&dir, "bad.json", "{ \"t_alpha\": [1.0,");
    let out = fordom(&["check-simple", "--rep", truncated.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("parse error"));

    let dependent = write_doc(
        &dir,
        "dependent.json",
        r#"{
            "t_alpha": [100.0, 0.0],
            "t_beta": [50.0, 0.0],
            "gammas": [[[0.0, 0.0], [1.0, 0.0], [-1.0, 0.0], [5.0, 0.0]]]
        }"#,
    );
    let out = fordom(&["check-simple", "--rep", dependent.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("DependentLattice"));
}

#[test]
fn usage_errors_exit_1() {
    let out = fordom(&["no-such-command"]);
    assert_eq!(code(&out), 1);

    let out = fordom(&["check-simple"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("--rep or --example"));

    let out = fordom(&["check-simple", "--example", "simple-ford", "--format", "svg"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("svg"));

    let out = fordom(&["find-t0", "--example", "simple-ford"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn determinant_drift_warns_but_proceeds() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(
        &dir,
        "drift.json",
        r#"{
            "t_alpha": [100.0, 0.0],
            "t_beta": [0.0, 100.0],
            "gammas": [[[0.0, 0.0], [1.001, 0.0], [-1.0, 0.0], [0.0, -5.0]]]
        }"#,
    );
    let out = fordom(&["check-simple", "--rep", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("renormalized"));
    assert!(stdout(&out).contains("verdict = simple"));
}

#[test]
fn out_flag_writes_the_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.txt");
    let out = fordom(&[
        "check-simple",
        "--example",
        "simple-ford",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
    let text = std::fs::read_to_string(&target).unwrap();
    assert!(text.starts_with("command = check-simple\n"));
}

#[test]
fn self_intersect_accepts_explicit_endpoints() {
    let out = fordom(&[
        "self-intersect",
        "--example",
        "simple-ford",
        "--geodesic",
        "0,-5",
        "inf",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("geodesic.e1 = 0,-5"));
    assert!(text.contains("geodesic.e2 = inf"));
    assert!(text.contains("min_translate_distance = "));
}
