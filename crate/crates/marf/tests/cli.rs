//! End-to-end checks of the command-line interface.
//!
//! Each test spawns the built binary, parses its JSON output, and checks the
//! exit code: 0 for an affirmative answer, 1 for a negative one, 2 for a
//! usage or computation error.

use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_marf"))
        .args(args)
        .output()
        .expect("the binary must spawn")
}

fn json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout must be JSON: {e}\n{}",
            String::from_utf8_lossy(&output.stdout)
        )
    })
}

#[test]
fn liftable_answers_with_exit_codes() {
    let yes = run(&["liftable", "-g", "0", "-p", "5,5,5", "-m", "2", "--json"]);
    assert_eq!(yes.status.code(), Some(0));
    assert_eq!(json(&yes)["liftable"], Value::Bool(true));

    let no = run(&["liftable", "-g", "0", "-p", "2,3,7", "-m", "2", "--json"]);
    assert_eq!(no.status.code(), Some(1));
    let body = json(&no);
    assert_eq!(body["liftable"], Value::Bool(false));
    assert_eq!(body["reason"], "gcd");
}

#[test]
fn components_reports_sizes_and_dimension() {
    let out = run(&["components", "-g", "2", "-m", "2", "--brute-force", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let body = json(&out);
    let components = body["components"].as_array().unwrap();
    let summary: Vec<(u64, u64, u64)> = components
        .iter()
        .map(|c| {
            (
                c["delta"].as_u64().unwrap(),
                c["orbit_size"].as_u64().unwrap(),
                c["teich_dimension"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(summary, vec![(0, 10, 6), (1, 6, 6)]);

    let empty = run(&["components", "-g", "0", "-p", "2,3,7", "-m", "2", "--json"]);
    assert_eq!(empty.status.code(), Some(1));
    assert_eq!(json(&empty)["components"], Value::Array(vec![]));
}

#[test]
fn normalize_reduces_to_normal_form() {
    let out = run(&[
        "normalize", "-g", "1", "-p", "5", "-m", "4", "--alpha", "0", "--beta", "2", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body = json(&out);
    assert_eq!(body["delta"], 2);
    assert_eq!(body["normal_form"]["alpha"][0], 2);
    assert_eq!(body["normal_form"]["beta"][0], 0);
    assert_eq!(body["twist_word"][0], "T3");

    let fixed = run(&[
        "normalize", "-g", "1", "-p", "5", "-m", "4", "--alpha", "2", "--beta", "0", "--json",
    ]);
    assert_eq!(json(&fixed)["twist_word"], Value::Array(vec![]));
}

#[test]
fn arf_count_distinguishes_liftable_degrees() {
    let liftable = run(&["arf-count", "-g", "1", "-p", "5", "-m", "4", "--json"]);
    assert_eq!(liftable.status.code(), Some(0));
    assert_eq!(json(&liftable)["count"], 16);

    let blocked = run(&["arf-count", "-g", "1", "-p", "5", "-m", "3", "--json"]);
    assert_eq!(blocked.status.code(), Some(1));
    assert_eq!(json(&blocked)["count"], 0);
}

#[test]
fn orbits_partitions_all_functions() {
    let out = run(&["orbits", "-g", "1", "-p", "5", "-m", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let body = json(&out);
    let mut sizes: Vec<(u64, u64)> = body["orbits"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| (o["delta"].as_u64().unwrap(), o["size"].as_u64().unwrap()))
        .collect();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![(1, 3), (2, 1)]);
}

#[test]
fn verify_numeric_passes_on_a_built_set() {
    let out = run(&["verify-numeric", "-g", "1", "-p", "5", "-m", "4", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let body = json(&out);
    assert_eq!(body["sequential"], Value::Bool(true));
    assert_eq!(body["liftable"], Value::Bool(true));
    let checks = body["axioms"]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 5);
    assert!(checks.iter().all(|c| c["passed"] == Value::Bool(true)));
}

#[test]
fn verify_numeric_rejects_unsupported_signatures() {
    let out = run(&["verify-numeric", "-g", "1", "-p", "5,5", "-m", "2", "--json"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("no sequential-set construction"),
        "stderr: {stderr}"
    );
}

#[test]
fn table_mode_renders_flat_rows() {
    let out = run(&["liftable", "-g", "2", "-m", "2", "--table"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("liftable"), "stdout: {stdout}");
    assert!(stdout.contains("true"), "stdout: {stdout}");
}
