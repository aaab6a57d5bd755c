//! Black-box behavior of the binary: exit codes, output formats, schema.

use std::io::Write;
use std::process::{Command, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_birkhoff-cli"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn facet_ehrhart_json_matches_reference_row() {
    let (code, stdout, _) = run(&["ehrhart", "--n", "3", "--zeros", "1,1", "--format", "json"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["n"], 3);
    assert_eq!(doc["root"], 1);
    assert_eq!(doc["dimension"], 3);
    assert_eq!(doc["zero_pattern"], serde_json::json!([[1, 1]]));
    assert_eq!(
        doc["result"]["coefficients"],
        serde_json::json!(["1", "11/6", "1", "1/6"])
    );
    assert!(doc["elapsed_ms"].is_number());
}

#[test]
fn oracle_count_matches_example() {
    let (code, stdout, _) = run(&["count", "--n", "3", "--t", "2", "--method", "oracle"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "21");
}

#[test]
fn formula_and_oracle_methods_agree() {
    let (_, formula, _) = run(&["count", "--n", "3", "--t", "3"]);
    let (_, dp, _) = run(&["count", "--n", "3", "--t", "3", "--method", "oracle"]);
    assert_eq!(formula, dp);
}

#[test]
fn cry_text_output_carries_the_leading_term() {
    let (code, stdout, _) = run(&["ehrhart", "--n", "4", "--cry", "--format", "text"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("1/360 t^6"), "{stdout}");
    assert!(stdout.contains("normalized volume: 2"), "{stdout}");
}

#[test]
fn invalid_input_exits_2() {
    let (code, _, stderr) = run(&["ehrhart", "--n", "1"]);
    assert_eq!(code, 2, "{stderr}");
    let (code, _, _) = run(&["ehrhart", "--n", "3", "--zeros", "4,1"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["ehrhart", "--n", "3", "--root", "5"]);
    assert_eq!(code, 2);
}

#[test]
fn empty_face_exits_3() {
    // forbidding the whole first row leaves no permutation
    let (code, _, stderr) = run(&["ehrhart", "--n", "2", "--zeros", "1,1;1,2"]);
    assert_eq!(code, 3, "{stderr}");
}

#[test]
fn oracle_budget_exits_4() {
    let (code, _, stderr) = run(&["count", "--n", "6", "--t", "1", "--method", "oracle"]);
    assert_eq!(code, 4, "{stderr}");
}

#[test]
fn latex_mgf_gated_to_small_n() {
    let (code, stdout, _) = run(&["mgf", "--n", "3", "--format", "latex"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("\\frac"));
    let (code, _, _) = run(&["mgf", "--n", "4", "--format", "latex"]);
    assert_eq!(code, 2);
}

#[test]
fn mgf_json_term_stream_has_expected_shape() {
    let (code, stdout, _) = run(&["mgf", "--n", "3", "--format", "json"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let terms = doc["result"].as_array().unwrap();
    assert_eq!(terms.len(), 18);
    for term in terms {
        assert_eq!(term["sign"], 1);
        assert_eq!(term["vertex"].as_array().unwrap().len(), 3);
        assert_eq!(term["rays"].as_array().unwrap().len(), 4);
    }
}

#[test]
fn integrate_reads_form_from_stdin() {
    let mut child = bin()
        .args(["integrate", "--n", "3", "--power", "0", "--form", "-", "--format", "text"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"n": 3, "y": [["1","2","3"],["4","5","6"],["7","8","9/2"]]}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    // p = 0 integrates the constant 1: the normalized volume of the polytope
    assert_eq!(text.trim(), "integral: 3");
}

#[test]
fn verify_passes_and_exits_0() {
    let (code, stdout, _) = run(&["verify", "--n", "3"]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.lines().all(|l| l.starts_with("PASS")), "{stdout}");
}
