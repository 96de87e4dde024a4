//! End-to-end CLI tests through the library entry point: exit-code
//! conventions, JSON shapes, determinism, and file handling.

use std::io::Write;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let full: Vec<String> = std::iter::once("lti".to_string())
        .chain(args.iter().map(|s| s.to_string()))
        .collect();
    let code = lti_cli::run(full, &mut stdout, &mut stderr);
    (
        code,
        String::from_utf8(stdout).unwrap(),
        String::from_utf8(stderr).unwrap(),
    )
}

fn json(stdout: &str) -> serde_json::Value {
    serde_json::from_str(stdout).expect("stdout should be JSON")
}

#[test]
fn check_lti_exits_zero_with_canonical_form() {
    let (code, out, _) = run(&["check", "y = a*D[y,1] + b*x"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["verdict"], "LTI");
    assert_eq!(v["canonical"]["a"][1], "1");
    assert!(v["witness"].is_null());
    assert!(!v["proof_trace"].as_array().unwrap().is_empty());
}

#[test]
fn check_affine_exits_two_with_witness() {
    let (code, out, _) = run(&["check", "y = a*x + b"]);
    assert_eq!(code, 2);
    let v = json(&out);
    assert_eq!(v["verdict"], "NotLinear");
    assert_eq!(v["witness"]["lhs"], "7*a + b");
    assert_eq!(v["witness"]["rhs"], "7*a + 2*b");
    assert!(v.get("canonical").is_none());
}

#[test]
fn check_malformed_input_exits_one_with_position() {
    let (code, out, err) = run(&["check", "y ="]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("offset 3"), "stderr: {err}");
}

#[test]
fn verify_first_order_defaults_all_pass() {
    let (code, out, _) = run(&["verify", "y = a*D[y,1] + b*x", "--bind", "a=-1,b=2"]);
    assert_eq!(code, 0);
    let v = json(&out);
    let checks = v["numeric_checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    assert!(checks.iter().all(|c| c["passed"] == true));
}

#[test]
fn verify_affine_reports_the_unit_error_and_exits_two() {
    let (code, out, _) = run(&[
        "verify",
        "y = a*x + b",
        "--bind",
        "a=1,b=1",
        "--x1",
        "const:v=3",
        "--x2",
        "const:v=4",
        "--alpha",
        "1",
        "--beta",
        "1",
    ]);
    assert_eq!(code, 2);
    let v = json(&out);
    let superposition = &v["numeric_checks"][0];
    assert_eq!(superposition["property"], "Superposition");
    assert_eq!(superposition["max_abs_error"], 1.0);
    assert_eq!(superposition["passed"], false);
}

#[test]
fn verify_unknown_binding_parameter_exits_one() {
    let (code, _, err) = run(&["verify", "y = a*x", "--bind", "a=1,c=2"]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown parameter"), "stderr: {err}");
}

#[test]
fn verify_missing_binding_exits_one() {
    let (code, _, err) = run(&["verify", "y = a*D[y,1] + b*x", "--bind", "a=-1"]);
    assert_eq!(code, 1);
    assert!(err.contains("no binding"), "stderr: {err}");
}

#[test]
fn bind_file_is_read_and_overridden() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("params.binding");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "# defaults\na=-1\nb=999").unwrap();
    drop(f);
    let (code, out, _) = run(&[
        "verify",
        "y = a*D[y,1] + b*x",
        "--bind-file",
        path.to_str().unwrap(),
        "--bind",
        "b=2",
    ]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["numeric_checks"][0]["configuration"]["binding"]["b"], 2.0);
}

#[test]
fn corpus_runs_clean_and_deterministically() {
    let (code_a, out_a, _) = run(&["corpus"]);
    let (code_b, out_b, _) = run(&["corpus"]);
    assert_eq!(code_a, 0);
    assert_eq!(code_b, 0);
    assert_eq!(out_a, out_b, "corpus output must be byte-identical");
    assert!(out_a.contains("10/10 entries as expected"));
}

#[test]
fn corpus_with_corrupted_expectation_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corpus.txt");
    std::fs::write(&path, "y = a*x => NotLinear\n").unwrap();
    let (code, out, _) = run(&["corpus", "--file", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("0/1 entries as expected"));
}

#[test]
fn empty_corpus_file_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.txt");
    std::fs::write(&path, "# nothing here\n").unwrap();
    let (code, out, _) = run(&["corpus", "--file", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("0/0 entries as expected"));
}

#[test]
fn simulate_writes_csv_with_the_settled_value() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.csv");
    let (code, out, _) = run(&[
        "simulate",
        "y = a*D[y,1] + b*x",
        "--bind",
        "a=-1,b=2",
        "--t-end",
        "10",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let v = json(&out);
    let final_value = v["final_value"].as_f64().unwrap();
    assert!((final_value - 2.0).abs() < 1e-3, "final {final_value}");
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("t,y\n"));
    assert_eq!(csv.lines().count(), 10002);
}

#[test]
fn simulate_zero_input_writes_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.csv");
    let (code, out, _) = run(&[
        "simulate",
        "y = a*D[y,1] + b*x",
        "--bind",
        "a=-1,b=2",
        "--signal",
        "zero",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["max_abs"], 0.0);
}

#[test]
fn simulate_implicit_form_works() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("implicit.csv");
    let (code, _, _) = run(&[
        "simulate",
        "y = D[y,1] + I[x]",
        "--signal",
        "step@1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
}

#[test]
fn simulate_refuses_non_lti_definitions() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nope.csv");
    let (code, _, err) = run(&[
        "simulate",
        "y = a*x + b",
        "--bind",
        "a=1,b=1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("cannot simulate"), "stderr: {err}");
}

#[test]
fn demo_defaults_demonstrate_the_violation() {
    let (code, out, _) = run(&["demo-shift-failure"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["property"], "ShiftFailureDemo");
    assert!(v["max_abs_error"].as_f64().unwrap() > 1e-3);
}

#[test]
fn demo_with_zero_signal_and_state_shows_nothing() {
    let (code, out, _) = run(&["demo-shift-failure", "--signal", "zero"]);
    assert_eq!(code, 2);
    assert_eq!(json(&out)["max_abs_error"], 0.0);
}

#[test]
fn demo_with_zero_a_exits_one() {
    let (code, _, err) = run(&["demo-shift-failure", "--a", "0"]);
    assert_eq!(code, 1);
    assert!(err.contains("nonzero"), "stderr: {err}");
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    let (code, _, err) = run(&["frobnicate"]);
    assert_eq!(code, 1);
    assert!(!err.is_empty());
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("check"));
}
