use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dieudonne")).args(args).env_remove("DIEUDONNE_SEED").output().unwrap()
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dieudonne"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn construct_then_invariants_via_stdin() {
    let m = run(&["--f", "2", "construct", "slope", "--a", "1"]);
    assert!(m.status.success());
    let rep = run_stdin(&["invariants", "--module", "-"], &m.stdout);
    assert!(rep.status.success(), "{}", String::from_utf8_lossy(&rep.stdout));
    let v = json(&rep);
    assert_eq!(v["a_number"], 2);
    assert_eq!(v["flags"]["supersingular"], true);
    assert_eq!(v["flags"]["ordinary"], false);
}

#[test]
fn non_rapoport_flags() {
    let m = run(&["--e", "2", "--ext", "2", "construct", "non-rapoport"]);
    let v = json(&run_stdin(&["invariants", "--module", "-", "--method", "oracle"], &m.stdout));
    assert_eq!(v["flags"]["rapoport"], false);
    assert_eq!(v["flags"]["dp"], true);
    assert_eq!(v["flags"]["superspecial"], true);
    assert_eq!(v["lie_type"]["slots"], serde_json::json!([[1, 1]]));
}

#[test]
fn odd_extension_reports_missing_pairing() {
    let v = json(&run(&["--e", "2", "--p", "5", "construct", "non-rapoport"]));
    assert!(v["note"].is_string());
    assert!(v["delta"].is_null());
}

#[test]
fn domain_errors_are_json_with_exit_1() {
    let o = run(&["--e", "9", "--f", "9", "poset"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["error"]["code"], "size_guard");

    let o = run_stdin(&["invariants", "--module", "-"], b"{not json");
    assert_eq!(o.status.code(), Some(1));
    assert!(json(&o)["error"]["message"].is_string());

    let o = run(&["--f", "2", "construct", "slope"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn poset_dot() {
    let o = run(&["--e", "1", "--f", "4", "poset", "--format", "dot"]);
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.starts_with("digraph"));
    assert_eq!(s.lines().filter(|l| l.contains("[label=")).count(), 16);
}

#[test]
fn hecke_chart_count() {
    let v = json(&run(&["--p", "3", "hecke"]));
    assert_eq!(v["counts"]["chart"], 33);
    assert_eq!(v["lines"], 4);
    assert_eq!(v["ok"], true);
}

#[test]
fn sampling_is_deterministic() {
    let args = ["--f", "2", "--e", "2", "--seed", "11", "sample-deform", "--tau", "0", "--trials", "20"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["trials"], 20);
}

#[test]
fn verify_suite_passes() {
    let o = run(&["verify", "--suite", "strata"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(json(&o)["passed"], true);
}
