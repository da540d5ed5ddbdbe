use std::io::Write;
use std::process::{Command, Output, Stdio};

fn mip(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mip"))
        .args(args)
        .arg("--no-timestamp")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    mip(args, None).status.code().unwrap()
}

#[test]
fn ok_and_invalid_input() {
    assert_eq!(code(&["certify", "--coeffs", "15,17,255,2161"]), 0);
    assert_eq!(code(&["certify", "--coeffs", "15,17"]), 2);
    assert_eq!(code(&["certify", "--coeffs", "15,18,255"]), 2);
    assert_eq!(code(&["construct", "--n", "4", "--p2", "4"]), 2);
    assert_eq!(code(&["certify"]), 2);
}

#[test]
fn negative_verdict_is_not_an_error() {
    let out = mip(&["certify", "--coeffs", "15,17,255"], None);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["result"]["verdict"], "NOT_INTERSECTIVE");
}

#[test]
fn minimal_needs_intersective_base() {
    assert_eq!(code(&["minimal", "--coeffs", "3,5,7,11"]), 4);
}

#[test]
fn search_exhausted() {
    assert_eq!(code(&["construct", "--n", "6", "--policy", "offset:50", "--search-cap", "10"]), 3);
}

#[test]
fn family_from_stdin_and_verify_round_trip() {
    let out = mip(&["certify", "--file", "-"], Some("[2, \"17\", 34]\n"));
    assert_eq!(out.status.code(), Some(0));
    let doc = String::from_utf8(out.stdout).unwrap();
    assert!(doc.contains("\"INTERSECTIVE\""));

    let ok = mip(&["verify", "--file", "-"], Some(&doc));
    assert_eq!(ok.status.code(), Some(0));

    let tampered = doc.replacen("\"INTERSECTIVE\"", "\"NOT_INTERSECTIVE\"", 1);
    assert_eq!(mip(&["verify", "--file", "-"], Some(&tampered)).status.code(), Some(5));
}
