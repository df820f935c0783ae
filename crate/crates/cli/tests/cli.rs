//! Exit-code and output-shape contract of the `ssp4` binary.

use std::process::{Command, Output};

fn ssp4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssp4"))
        .args(args)
        .env_remove("SSP4_SEED")
        .output()
        .expect("binary runs")
}

#[test]
fn count_prints_a_bare_integer() {
    let out = ssp4(&["count", "--p", "31", "--group", "d8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1");
}

#[test]
fn composite_modulus_is_a_usage_error() {
    let out = ssp4(&["count", "--p", "15", "--group", "d8"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("15"));
}

#[test]
fn bad_seed_env_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_ssp4"))
        .args(["find", "--p", "19"])
        .env("SSP4_SEED", "not-a-number")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn table_csv_has_the_fixed_header_and_known_first_row() {
    let out = ssp4(&["table", "--pmin", "19", "--pmax", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("p,All,D4,D8,D10,G32,G40\n"), "got: {text}");
    assert!(text.contains("19,2,1,0,0,0,1"), "got: {text}");
}

#[test]
fn find_below_nineteen_prints_null() {
    let out = ssp4(&["find", "--p", "13"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "null");
}

#[test]
fn verify_distinguishes_models_and_rejects_degenerate_ones() {
    let out = ssp4(&["verify", "--p", "41", "--model", "0,1,0,0,0,0,0,0,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["superspecial"], serde_json::Value::Bool(true));
    assert_eq!(v["genus"], serde_json::json!(4));

    // A repeated root is a runtime error (exit 1), not a usage error.
    let bad = ssp4(&["verify", "--p", "41", "--model", "0,0,1"]);
    assert_eq!(bad.status.code(), Some(1));

    // Unparseable coefficients are a usage error.
    let worse = ssp4(&["verify", "--p", "41", "--model", "one,two"]);
    assert_eq!(worse.status.code(), Some(3));
}

#[test]
fn help_exits_zero() {
    let out = ssp4(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}
