use std::path::Path;
use std::process::{Command, Output};

use ncdiff::{catalog, Field};
use serde_json::Value;

fn ncdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncdiff")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn check_algebra_accepts_catalog_and_files() {
    let o = ncdiff(&["check-algebra", "matrix(2)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("valid: true"));

    let dir = tempfile::tempdir().unwrap();
    let a = catalog("trunc_poly(3)", Field::Rational).unwrap();
    let path = write(dir.path(), "a.json", &a.to_json());
    assert_eq!(ncdiff(&["check-algebra", &path]).status.code(), Some(0));
}

#[test]
fn invalid_algebra_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let a = catalog("trunc_poly(2)", Field::Rational).unwrap();
    let mut spec: Value = serde_json::from_str(&a.to_json()).unwrap();
    spec["unit"] = serde_json::json!(["0", "1"]);
    let path = write(dir.path(), "bad.json", &spec.to_string());
    let o = ncdiff(&["check-algebra", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("valid: false"));
}

#[test]
fn usage_and_input_errors_exit_two() {
    assert_eq!(ncdiff(&["check-algebra", "no_such_algebra(1)"]).status.code(), Some(2));
    assert_eq!(ncdiff(&["check-algebra", "field", "--field", "p:4"]).status.code(), Some(2));
    assert_eq!(ncdiff(&["lunts", "field", "--side", "up"]).status.code(), Some(2));
    assert_eq!(ncdiff(&["derivations", "field", "--target", "nonsense"]).status.code(), Some(2));
    assert_eq!(ncdiff(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn derivations_prints_basis_and_dimension() {
    let o = ncdiff(&["derivations", "matrix(2)", "--target", "regular"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("u0 ="));
    assert!(text.trim_end().ends_with("dim = 3"));
}

#[test]
fn graded_derivations_over_a_prime_field() {
    let o = ncdiff(&["derivations", "grassmann(2)", "--graded", "--field", "p:5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("dim = 8"));
}

#[test]
fn compare_defs_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let o = ncdiff(&["compare-defs", "matrix(2)", "--order", "1", "--json", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["order"], 1);
    assert_eq!(v["commutative"], false);
    assert!(v["relations"].as_array().unwrap().iter().any(|r| r["relation"] != "equal"));
}

#[test]
fn filtrations_and_calculi() {
    let o = ncdiff(&["lunts", "trunc_poly(3)", "--order", "2", "--side", "right"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[3, 5, 7]"));
    assert_eq!(ncdiff(&["two-sided", "matrix(2)", "--order", "1"]).status.code(), Some(0));
    assert_eq!(ncdiff(&["ce", "quaternions", "--max-degree", "2"]).status.code(), Some(0));
    assert_eq!(ncdiff(&["graded-ce", "grassmann(2)"]).status.code(), Some(0));
    let u = ncdiff(&["universal", "trunc_poly(2)"]);
    assert_eq!(u.status.code(), Some(0));
    assert!(stdout(&u).contains("a.da - da.a = [0 0 0 2]"));
    let c = ncdiff(&["cartan", "matrix(2)", "--side", "right"]);
    assert_eq!(c.status.code(), Some(0));
    assert!(stdout(&c).contains("witness:"));
    let j = ncdiff(&["jets", "xy_sq", "--order", "2", "--target", "free(2)"]);
    assert_eq!(j.status.code(), Some(0));
    assert_eq!(ncdiff(&["jets", "matrix(2)", "--two-sided"]).status.code(), Some(0));
    assert_eq!(ncdiff(&["diff-space", "matrix(2)", "--definition", "dv-first-order"]).status.code(), Some(0));
}

#[test]
fn check_module_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let a = std::sync::Arc::new(catalog("trunc_poly(2)", Field::Rational).unwrap());
    let m = ncdiff::Bimodule::free(&a, 2);
    let path = write(dir.path(), "m.json", &m.to_json());
    let o = ncdiff(&["check-module", &path, "--algebra", "trunc_poly(2)"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(ncdiff(&["check-module", "omega1", "--algebra", "matrix(2)"]).status.code(), Some(0));
}

#[test]
fn scenario_files_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(
        dir.path(),
        "good.json",
        r#"{"id": "good", "checks": [
            {"name": "duality", "algebra": "matrix(2)", "op": {"kind": "duality"},
             "expect": {"kind": "dimension", "value": 3}}]}"#,
    );
    let wrong = write(
        dir.path(),
        "wrong.json",
        r#"{"id": "wrong", "checks": [
            {"name": "collapse", "algebra": "matrix(2)", "op": {"kind": "compare_definitions", "order": 1},
             "expect": {"kind": "holds"}}]}"#,
    );
    let broken = write(dir.path(), "broken.json", r#"{"id": "x", "checks": [{"name": 1}]}"#);
    assert_eq!(ncdiff(&["run-scenarios", &good]).status.code(), Some(0));
    assert_eq!(ncdiff(&["run-scenarios", &wrong]).status.code(), Some(1));
    assert_eq!(ncdiff(&["run-scenarios", &broken]).status.code(), Some(2));
    assert_eq!(ncdiff(&["run-scenarios", "--scenario", "nope"]).status.code(), Some(2));
}

#[test]
fn built_in_scenarios() {
    let list = ncdiff(&["run-scenarios", "--list"]);
    assert!(stdout(&list).lines().any(|l| l == "dilemma-M2"));
    let o = ncdiff(&["run-scenarios", "--scenario", "commutative-collapse"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("commutative-collapse: 14 checks, 0 failed"));
    let e = ncdiff(&["run-scenarios", "--scenario", "empty"]);
    assert_eq!(stdout(&e), "empty: 0 checks, 0 failed\n");
}
