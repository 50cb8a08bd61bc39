use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use frobmod::dwork::DworkSolutionDoc;
use frobmod::froblift::{FrobeniusLift, LiftDoc};
use frobmod::scalar::PrimeContext;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frobmod")).args(args).output().expect("binary runs")
}

fn run_with(cmd: &str, input: &str, extra: &[&str]) -> Output {
    let path = data(input);
    let mut args = vec![cmd, "--input", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn malformed_lift_exits_2_and_names_the_condition() {
    let out = run_with("zero-center", "lift_malformed.json", &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("lifting the q-power map modulo p"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
}

#[test]
fn parameter_ranges_are_validated() {
    assert_eq!(run_with("zero-center", "lift_standard.json", &["--p", "15"]).status.code(), Some(2));
    assert_eq!(run_with("zero-center", "lift_standard.json", &["--p", "17"]).status.code(), Some(2));
    assert_eq!(run_with("zero-center", "lift_standard.json", &["--prec", "65"]).status.code(), Some(2));
    assert_eq!(run(&["witt-ce", "--len", "9"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn unreadable_inputs_exit_2() {
    assert_eq!(run(&["newton", "--input", "/nonexistent/series.json"]).status.code(), Some(2));
    let garbage = std::env::temp_dir().join(format!("frobmod-garbage-{}.json", std::process::id()));
    fs::write(&garbage, "{\"lo\": 0").unwrap();
    assert_eq!(run(&["newton", "--input", garbage.to_str().unwrap()]).status.code(), Some(2));
    fs::remove_file(garbage).ok();
}

#[test]
fn zero_center_removes_the_constant_term() {
    let out = run_with("zero-center", "lift_shifted.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    let doc: LiftDoc = serde_json::from_value(report(&out)["lift"].clone()).unwrap();
    let ctx = PrimeContext::new(3, 1, 8, 1).unwrap();
    let lift = FrobeniusLift::from_doc(&ctx, &doc).unwrap();
    assert!(lift.is_zero_centered());
}

#[test]
fn apply_frob_substitutes_t_cubed() {
    let series = data("series_log_head.json");
    let out = run_with("apply-frob", "lift_standard.json", &["--series", series.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let coeffs = report(&out)["coeffs"].as_object().unwrap().keys().cloned().collect::<Vec<_>>();
    assert_eq!(coeffs, ["0", "3", "6", "9"]);
}

#[test]
fn newton_and_weierstrass() {
    let out = run_with("newton", "series_log_head.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["root_valuations"], serde_json::json!([["1/2", 2], ["0", 1]]));
    let out = run_with("weierstrass", "series_log_head.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["product_ok"], true);
    assert_eq!(r["distinguished"]["coeffs"]["2"]["coords"], serde_json::json!([1]));
    let out = run_with("weierstrass", "series_log_head.json", &["--annulus", "0,1/2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["product_ok"], true);
}

#[test]
fn rank1_and_slopes() {
    let out = run_with("rank1", "module_rank1.json", &["--k", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["eigen_ok"], true);
    assert_eq!(r["ell"], 0);
    let out = run_with("slopes", "module_diag.json", &[]);
    assert_eq!(report(&out)["slopes"], serde_json::json!(["0", "1"]));
    assert_eq!(run_with("rank1", "module_diag.json", &[]).status.code(), Some(2));
}

#[test]
fn dwork_reaches_the_order_and_writes_output() {
    let dest = std::env::temp_dir().join(format!("frobmod-dwork-{}.json", std::process::id()));
    let before = fs::read(data("dwork_upper.json")).unwrap();
    let out = run_with("dwork", "dwork_upper.json", &["--order", "40", "--output", dest.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    assert!(stderr(&out).contains("residual 40 of 40"));
    let doc: DworkSolutionDoc = serde_json::from_str(&fs::read_to_string(&dest).unwrap()).unwrap();
    assert_eq!(doc.residual, 40);
    assert!(doc.precision > 0);
    // upper unitriangular
    assert!(doc.u[1][0].coeffs.is_empty());
    let ctx = PrimeContext::new(3, 1, 8, 1).unwrap();
    assert_eq!(doc.u(&ctx).unwrap().nrows(), 2);
    assert_eq!(fs::read(data("dwork_upper.json")).unwrap(), before);
    fs::remove_file(dest).ok();
}

#[test]
fn verify_eigen_exit_codes() {
    let zero = data("vector_zero.json");
    let out = run_with("verify-eigen", "module_diag.json", &["--vector", zero.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["in_m"], true);
    let unit = data("vector_unit.json");
    let out = run_with("verify-eigen", "module_diag.json", &["--vector", unit.to_str().unwrap(), "--ell", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["eigen_ok"], false);
}

#[test]
fn witt_ce_default_run_is_green() {
    let out = run(&["witt-ce", "--p", "2", "--len", "6", "--steps", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = report(&out);
    assert_eq!(r["all_ok"], true);
    assert_eq!(r["descent"]["v_in_m"], false);
    assert_eq!(r["slopes"]["generic"], serde_json::json!(["0", "2"]));
}

#[test]
fn selftest_is_deterministic() {
    let a = run(&["selftest", "--seed", "7", "--only", "1,4,9,10"]);
    let b = run(&["selftest", "--seed", "7", "--only", "1,4,9,10"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    assert_eq!(r["passed"], 4);
    assert_eq!(r["results"].as_array().unwrap().len(), 4);
}
