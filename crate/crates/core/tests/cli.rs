//! End-to-end runs of the `derivator` binary.

use std::process::{Command, Output};

fn data(name: &str) -> String {
    format!("{}/../../data/{}", env!("CARGO_MANIFEST_DIR"), name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_derivator")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gn_on_identity_chain() {
    let o = run(&["gn", &data("a3_identity_chain.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn output_file_is_json() {
    let dir = std::env::temp_dir().join(format!("derivator-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gn.json");
    let o = run(&["--output", path.to_str().unwrap(), "gn", &data("a3_identity_chain.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v.is_object());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn membership_exit_codes() {
    assert_eq!(run(&["membership", "--spec", "A(4,2)", &data("zero_a42.json")]).status.code(), Some(0));
    // Wrong shape for the spec.
    assert_eq!(run(&["membership", "--spec", "A(3,2)", &data("a3_identity_chain.json")]).status.code(), Some(1));
}

#[test]
fn epi_check_reports_the_failing_object() {
    let o = run(&["epi-check", "--map", "collapse_v"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("d"));
}

#[test]
fn malformed_input_is_a_schema_error() {
    let dir = std::env::temp_dir().join(format!("derivator-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, "{\n  \"field\": 32003,\n").unwrap();
    let o = run(&["gn", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn checks_and_demo() {
    assert_eq!(run(&["dold-kan", &data("a4_filtration.json")]).status.code(), Some(0));
    assert_eq!(run(&["mesh-check", &data("a3_identity_chain.json")]).status.code(), Some(0));
    assert_eq!(run(&["hocolim", &data("span.json")]).status.code(), Some(0));
    assert_eq!(run(&["tcof", &data("corner_only_square.json")]).status.code(), Some(0));
    assert_eq!(run(&["demo"]).status.code(), Some(0));
}

#[test]
fn runs_are_deterministic() {
    let a = run(&["--seed", "5", "selftest", "--only", "7,10"]);
    let b = run(&["--seed", "5", "selftest", "--only", "7,10"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let g1 = run(&["gn", &data("a4_filtration.json")]);
    let g2 = run(&["gn", &data("a4_filtration.json")]);
    assert_eq!(g1.stdout, g2.stdout);
}
