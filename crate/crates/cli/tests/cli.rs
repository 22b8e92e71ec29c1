use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

const F1: &str = "states 5\nlabel 0 p\nlabel 1 p\nlabel 2 p\nlabel 3 q\nlabel 4 q\ntransitions 3\n0 3\n1 2\n2 4\n";
const F2: &str = "states 5\nlabel 0 p\nlabel 1 q\nlabel 2 r\nlabel 3 p\nlabel 4 q\ntransitions 3\n0 1\n0 2\n3 4\n";

fn stsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn compute_prints_the_preorder() {
    let dir = TempDir::new().unwrap();
    let f2 = write(&dir, "f2.ks", F2);
    let out = stsim(&["compute", f2.to_str().unwrap(), "--emit", "preorder"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "block 0: 0\nblock 1: 1 4\nblock 2: 2\nblock 3: 3\nleq 3 0\n");
}

#[test]
fn compute_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let gen = stsim(&["generate", "--states", "12", "--density", "0.2", "--labels", "2", "--seed", "5"]);
    let k = write(&dir, "g.ks", &stdout(&gen));
    let a = stsim(&["compute", k.to_str().unwrap(), "--emit", "all"]);
    let b = stsim(&["compute", k.to_str().unwrap(), "--emit", "all"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn oracle_cross_check_passes() {
    let dir = TempDir::new().unwrap();
    let f1 = write(&dir, "f1.ks", F1);
    let out = stsim(&["compute", f1.to_str().unwrap(), "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "block 0: 0 1 2\nblock 1: 3 4\n");
}

#[test]
fn trace_goes_to_stderr() {
    let dir = TempDir::new().unwrap();
    let f2 = write(&dir, "f2.ks", F2);
    let out = stsim(&["compute", f2.to_str().unwrap(), "--trace", "--emit", "partition"]);
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(err.starts_with("iteration 1: refiner"), "{err}");
    assert!(stdout(&out).starts_with("block 0: 0\n"));
}

#[test]
fn quotient_is_already_minimal() {
    let dir = TempDir::new().unwrap();
    let gen = stsim(&["generate", "--states", "10", "--density", "0.25", "--labels", "2", "--seed", "11"]);
    let k = write(&dir, "g.ks", &stdout(&gen));
    let q = stsim(&["compute", k.to_str().unwrap(), "--emit", "quotient"]);
    assert_eq!(q.status.code(), Some(0));
    let q_text = stdout(&q);
    let q_path = write(&dir, "q.ks", &q_text);
    let again = stsim(&["compute", q_path.to_str().unwrap(), "--emit", "partition"]);
    let classes = stdout(&again).lines().count();
    let states: usize = q_text.lines().next().unwrap()["states ".len()..].parse().unwrap();
    assert_eq!(classes, states);
}

#[test]
fn check_accepts_the_computed_preorder() {
    let dir = TempDir::new().unwrap();
    let f2 = write(&dir, "f2.ks", F2);
    let result = stsim(&["compute", f2.to_str().unwrap()]);
    let rel = write(&dir, "f2.rel", &stdout(&result));
    let out = stsim(&["check", f2.to_str().unwrap(), "--relation", rel.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "accepted\n");
}

#[test]
fn check_rejects_the_label_closure_with_a_witness() {
    let dir = TempDir::new().unwrap();
    let f2 = write(&dir, "f2.ks", F2);
    let rel = write(&dir, "closure.rel", "block 0: 0 3\nblock 1: 1 4\nblock 2: 2\n");
    let out = stsim(&["check", f2.to_str().unwrap(), "--relation", rel.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.starts_with("rejected\nrefiner: block {0 3} moving into block {2}\n"), "{text}");
    let out = stsim(&["check", f2.to_str().unwrap(), "--relation", rel.to_str().unwrap(), "--definition"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn non_preorders_fall_back_to_the_definition() {
    let dir = TempDir::new().unwrap();
    let f2 = write(&dir, "f2.ks", F2);
    let rel = write(&dir, "sim.rel", "3 0\n4 1\n");
    let out = stsim(&["check", f2.to_str().unwrap(), "--relation", rel.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stderr).unwrap().contains("not reflexive"));
}

#[test]
fn parse_and_usage_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.ks", &F1.replace("2 4\n", "trans 0 9\n"));
    let out = stsim(&["compute", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 10, column 9"));
    assert_eq!(stsim(&["compute"]).status.code(), Some(2));
    assert_eq!(stsim(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(stsim(&["compute", "/nonexistent/file.ks"]).status.code(), Some(2));
    let gen = stsim(&["generate", "--states", "0", "--density", "0.5", "--labels", "1", "--seed", "1"]);
    assert_eq!(gen.status.code(), Some(2));
}

#[test]
fn generate_is_reproducible() {
    let args = ["generate", "--states", "6", "--density", "0.3", "--labels", "3", "--seed", "42"];
    let a = stsim(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, stsim(&args).stdout);
    assert!(stdout(&a).starts_with("states 6\n"));
}

#[test]
fn selftest_passes() {
    let out = stsim(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}
