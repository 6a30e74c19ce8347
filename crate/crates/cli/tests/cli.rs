//! End-to-end behaviour of the `jacobiform` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jacobiform")).args(args).env_remove("JACOBIFORM_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    stdout(&o)
}

fn squash(s: &str) -> String {
    s.split_whitespace().collect()
}

fn golden(args: &[&str], file: &str) {
    let expected = std::fs::read_to_string(data(file)).unwrap();
    assert_eq!(squash(&ok(args)), squash(&expected), "{args:?} against {file}");
}

#[test]
fn general_listing_matches_golden() {
    golden(&["derive", "--general", "--format", "latex"], "general.tex");
}

#[test]
fn pointfree_listing_matches_golden() {
    golden(&["derive", "--general", "--pointfree", "--format", "latex"], "general_pointfree.tex");
}

#[test]
fn annotated_listing_matches_golden() {
    golden(&["derive", "--pointfree", "--tensor-annotation"], "general_annotated.tex");
}

#[test]
fn two_by_two_listing_matches_golden() {
    golden(&["derive", "--m", "2", "--n", "2", "--k", "2", "--i", "1", "--format", "latex"], "two_by_two.tex");
    golden(
        &["derive", "--m", "2", "--n", "2", "--k", "2", "--i", "1", "--pointfree", "--tensor-annotation"],
        "two_by_two_annotated.tex",
    );
}

#[test]
fn text_listing_has_no_markup() {
    let out = ok(&["derive", "--general", "--pointfree", "--format", "text"]);
    assert!(out.lines().count() > 12);
    assert!(!out.contains('\\') && !out.contains("color"), "{out}");
    assert!(out.lines().nth(3).unwrap().starts_with("=lin′"));
}

#[test]
fn derive_json_reports_tags() {
    let v: serde_json::Value = serde_json::from_str(&ok(&["derive", "--format", "json"])).unwrap();
    assert_eq!(v["ok"], true);
    let tags: Vec<&str> = v["result"]["tags"].as_array().unwrap().iter().map(|t| t.as_str().unwrap()).collect();
    assert_eq!(tags, ["def", "comp", "lin'", "comp", "def", "chain'", "def", "beta", "def", "comp", "beta", "def"]);
}

#[test]
fn derive_rejects_out_of_range_positions() {
    let o = run(&["derive", "--m", "2", "--i", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--i 3"));
    assert_eq!(run(&["derive", "--general", "--m", "2"]).status.code(), Some(2));
    assert_eq!(run(&["derive", "--tensor-annotation"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two_before_reading_files() {
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
    assert_eq!(run(&["check", "/nonexistent/file", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["eval", &data("apply.term"), "--env", &data("apply.env"), "--format", "latex"]).status.code(), Some(2));
}

#[test]
fn check_reports_types_and_paths() {
    assert_eq!(ok(&["check", &data("apply.term")]).trim(), "scalar");
    assert_eq!(ok(&["check", &data("sum_of_squares.term")]).trim(), "(funm1 (arity-var m))");
    let o = run(&["check", &data("ill_typed.term")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/0/1"), "{}", stderr(&o));
    let o = run(&["check", &data("ill_typed.term"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stderr(&o)).unwrap();
    assert_eq!(v["ok"], false);
    assert_eq!(v["error"]["path"], "/0/1");
    let o = run(&["check", &data("unbalanced.term")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("expected ')'"));
}

#[test]
fn expand_and_emit() {
    let out = ok(&["expand", &data("sum_of_squares.term"), "--arity", "m=2", "--format", "barred-arrow"]);
    assert_eq!(out.trim(), "(x^1,x^2) ↦ x^1 · x^1 + x^2 · x^2");
    assert_eq!(ok(&["emit", &data("apply_expanded.term")]).trim(), "(x…) ↦ g(x…)");
    let o = run(&["expand", &data("sum_of_squares.term"), "--arity", "n=2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn derivative_of_a_product_evaluates_to_the_other_factor() {
    let d = ok(&["deriv", "--f", &data("product.term"), "--j", "1", "--i", "2"]);
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("d.term");
    std::fs::write(&file, d).unwrap();
    let out = ok(&["eval", file.to_str().unwrap(), "--env", &data("product.env")]);
    assert_eq!(out.trim(), "(poly 2 \"x1\")");
    let shown = ok(&["deriv", "--f", &data("product.term"), "--j", "1", "--i", "2", "--format", "barred-arrow"]);
    assert_eq!(shown.trim(), "(x^1,x^2) ↦ (z ↦ F^1(x^1,z))′(x^2)");
}

#[test]
fn eval_computes_exactly() {
    // (3² + 1) · 3
    assert_eq!(ok(&["eval", &data("apply.term"), "--env", &data("apply.env")]).trim(), "30");
}

#[test]
fn transform_forward_inverse_and_kronecker() {
    let field = data("covector.field");
    let out = ok(&["transform", "--field", &field, "--map", &data("scale.map")]);
    assert!(out.contains("(component () (0) \"2\")") && out.contains("(component () (1) \"3\")"), "{out}");
    let chained = ok(&["transform", "--field", &field, "--map", &data("scale.map"), "--map", &data("shear.map")]);
    assert!(chained.contains("(component () (1) \"-1\")"), "{chained}");
    let back = ok(&["transform", "--field", &field, "--map", &data("scale.map"), "--direction", "inverse"]);
    assert!(back.contains("\"8\"") && back.contains("\"27\""), "{back}");
    let checked = ok(&["transform", "--field", &field, "--map", &data("shear.map"), "--check-kronecker"]);
    assert!(checked.contains("seed ") && checked.contains("kronecker shear: holds"), "{checked}");
    let o = run(&["transform", "--field", &field, "--map", &data("no_inverse.map")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no_inverse"));
}

#[test]
fn verify_is_deterministic_and_seedable() {
    let a = ok(&["verify", "--trials", "3"]);
    assert_eq!(a, ok(&["verify", "--trials", "3"]));
    assert!(a.contains("all equalities hold"));
    let o = Command::new(env!("CARGO_BIN_EXE_jacobiform"))
        .args(["verify", "--env", &data("maps.env"), "--trials", "2"])
        .env("JACOBIFORM_SEED", "7")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("seed 7\n"), "{}", stdout(&o));
    assert!(ok(&["verify", "--seed", "9", "--trials", "1"]).contains("seed 9\n"));
}

#[test]
fn output_is_written_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("listing.tex");
    let o = run(&["derive", "--output", target.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(squash(&std::fs::read_to_string(&target).unwrap()), squash(&ok(&["derive"])));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let failing = dir.path().join("never.tex");
    let o = run(&["check", &data("ill_typed.term"), "--output", failing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!failing.exists());
    let missing = dir.path().join("no/such/dir.tex");
    assert_eq!(run(&["derive", "--output", missing.to_str().unwrap()]).status.code(), Some(2));
}
