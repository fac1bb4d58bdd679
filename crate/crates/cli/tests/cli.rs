//! End-to-end checks of the binary: JSON schemas, exit codes, and
//! determinism of the verification harness.

use std::process::{Command, Output};

use serde_json::Value;

fn bridge_cancel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bridge-cancel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    let out = bridge_cancel(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON object")
}

fn exit_code(args: &[&str]) -> i32 {
    bridge_cancel(args).status.code().expect("exit code")
}

#[test]
fn relator_json() {
    let v = json_of(&["relator", "2/5"]);
    assert_eq!(v["word"], "abaBAbabAB");
    assert_eq!(v["length"], 10);
    assert_eq!(v["sseq"], serde_json::json!([3, 2, 3, 2]));
    assert_eq!(v["tokens"][3], "B");

    let v = json_of(&["relator", "1/1"]);
    assert_eq!(v["word"], "aB");
}

#[test]
fn exit_code_contract() {
    assert_eq!(exit_code(&["relator", "0/1"]), 3); // domain
    assert_eq!(exit_code(&["relator", "x/y"]), 2); // parse
    assert_eq!(exit_code(&["smallcancel", "1/1"]), 3); // trivial link
    assert_eq!(exit_code(&["smallcancel", "abc"]), 2);
    assert_eq!(exit_code(&["nullhomotopic", "inf", "1/3"]), 3);
    assert_eq!(exit_code(&["verify", "bogus"]), 2);
    assert_eq!(exit_code(&["verify", "duality", "--max-denominator", "1"]), 2);
    assert_eq!(exit_code(&["no-such-command"]), 2); // clap usage error
    assert_eq!(exit_code(&["relator", "2/5"]), 0);
}

#[test]
fn decompose_json_and_input_forms() {
    let v = json_of(&["decompose", "5/17"]);
    assert_eq!(v["S1"], serde_json::json!([4, 3, 4]));
    assert_eq!(v["S2"], serde_json::json!([3, 3]));
    assert_eq!(v["cf"], "[3,2,2]");
    assert_eq!(v["occurrences"]["S1"], 2);
    assert_eq!(v["occurrences"]["S2"], 2);

    // continued fraction input is normalized to the same slope
    let a = json_of(&["decompose", "[2,2]"]);
    let b = json_of(&["decompose", "2/5"]);
    assert_eq!(a, b);

    // one-term expansions have an empty S1 with vacuous occurrence count
    let v = json_of(&["decompose", "1/3"]);
    assert_eq!(v["S1"], serde_json::json!([]));
    assert_eq!(v["S2"], serde_json::json!([3]));
    assert!(v["occurrences"]["S1"].is_null());
}

#[test]
fn smallcancel_json() {
    let v = json_of(&["smallcancel", "2/5"]);
    assert_eq!(v["c4"], true);
    assert_eq!(v["t4"], true);
    assert_eq!(v["max_piece"], 4);
    assert_eq!(v["min_pieces"], 4);

    let v = json_of(&["smallcancel", "1/2"]);
    assert_eq!(v["c4"], true);
    assert_eq!(v["t4"], true);
}

#[test]
fn null_homotopy_json() {
    let v = json_of(&["nullhomotopic", "5/17", "69/238"]);
    assert_eq!(v["null_homotopic"], true);
    assert_eq!(v["canonical"], "inf");

    let v = json_of(&["nullhomotopic", "5/17", "1/3"]);
    assert_eq!(v["null_homotopic"], false);

    let v = json_of(&["nullhomotopic", "5/17", "5/17"]);
    assert_eq!(v["null_homotopic"], true);
    assert_eq!(v["canonical"], "5/17");
}

#[test]
fn orbit_reduce_json() {
    let v = json_of(&["orbit-reduce", "5/17", "7/24"]);
    assert_eq!(v["canonical"], "3/10");
    assert_eq!(v["null_homotopic"], false);
    assert_eq!(v["trail"], serde_json::json!([[[69, -20], [238, -69]]]));
}

#[test]
fn sseq_json() {
    let v = json_of(&["sseq", "2/5"]);
    assert_eq!(v["S"], serde_json::json!([3, 2, 3, 2]));
    // canonical rotation is the lexicographically least one
    assert_eq!(v["CS"], serde_json::json!([2, 3, 2, 3]));
}

#[test]
fn verify_passes_and_is_deterministic() {
    let out = bridge_cancel(&["verify", "half-rotation", "--max-denominator", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["failures"], serde_json::json!([]));
    assert_eq!(v["cases"], 128);

    let args = [
        "verify",
        "connection",
        "--sample-r",
        "5/17,[2,2]",
        "--max-denominator",
        "15",
    ];
    let first = bridge_cancel(&args);
    let second = bridge_cancel(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn verify_c4t4_small_range() {
    let out = bridge_cancel(&["verify", "c4t4", "--max-denominator", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["failures"], serde_json::json!([]));
}

#[test]
fn plain_text_mode() {
    let out = bridge_cancel(&["relator", "2/5", "--json", "false"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("word:   abaBAbabAB"), "got: {text}");
}

#[test]
fn thread_cap_env_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_bridge-cancel"))
        .args(["verify", "duality", "--max-denominator", "25"])
        .env("BRIDGE_CANCEL_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
