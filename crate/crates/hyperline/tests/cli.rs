//! End-to-end checks of the shipped binary: flags, script and JSON modes,
//! REPL on stdin, and exit codes.

use std::io::Write;
use std::process::{Command, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hyperline"))
}

fn script_path(name: &str) -> String {
    format!("{}/scripts/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn script_mode_plain() {
    let out = bin()
        .args(["--script", &script_path("laugwitz.dhr")])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("> force F0 |= a * b = 0\ntrue"));
    assert!(stdout.contains("false  (refuted by: F0 + res(0,2))"));
}

#[test]
fn script_mode_json_is_deterministic() {
    let run = || {
        let out = bin()
            .args(["--json", "--seed", "9", "--script", &script_path("standard_parts.dhr")])
            .output()
            .unwrap();
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    let first = run();
    assert_eq!(first, run());
    // one JSON object per command, all ok, no timing field by default
    for line in first.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["ok"], serde_json::json!(true));
        assert!(v.get("timing_ms").is_none());
    }
}

#[test]
fn repl_reads_stdin_and_reports_errors_in_exit_code() {
    let mut child = bin()
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(b"let a = delta(2)\nforce F0 |= a * a = 4\nnot a command\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("true"));
    assert!(stdout.contains("error: syntax error"));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_flags_and_missing_files() {
    let out = bin().arg("--nonsense").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["--script", "/definitely/not/here.dhr"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
