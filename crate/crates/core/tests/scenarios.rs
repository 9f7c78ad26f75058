use std::process::Command;

use blowdown::kernel::{parse_rational, parse_repeating_decimal};
use blowdown::scenario::{
    render_machine, run_source, verify_source, RunOptions, ScenarioError, BUILTIN_B4, BUILTIN_C4,
};
use serde_json::Value;

#[test]
fn builtins_verify() {
    for src in [BUILTIN_B4, BUILTIN_C4] {
        let v = verify_source(src).unwrap();
        assert!(v.ok(), "{v:?}");
    }
}

#[test]
fn perturbed_quadric_fails_at_p8() {
    let src = BUILTIN_B4.replace("\"2*sqrt2*i\"", "\"2*i\"");
    assert_ne!(src, BUILTIN_B4);
    let v = verify_source(&src).unwrap();
    assert!(!v.ok());
    assert!(v.failures.iter().any(|f| f.contains("P8")), "{:?}", v.failures);
}

#[test]
fn dangling_point_reference_names_the_point() {
    let src = BUILTIN_B4.replacen("at = \"P2\"", "at = \"P42\"", 1);
    assert_ne!(src, BUILTIN_B4);
    let err = run_source(&src, &RunOptions::default()).unwrap_err();
    assert_eq!(err.exit_code(), 1);
    assert!(err.to_string().contains("P42"), "{err}");
}

#[test]
fn unknown_keys_are_parse_errors() {
    let src = format!("{BUILTIN_B4}\nmystery = 1\n");
    let err = run_source(&src, &RunOptions::default()).unwrap_err();
    assert!(matches!(err, ScenarioError::Parse(_)));
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn wrong_expectation_is_a_mismatch() {
    let opts = RunOptions {
        expect: Some("CP2#9-CP2".into()),
        samples: Some(100),
        ..Default::default()
    };
    let report = run_source(BUILTIN_B4, &opts).unwrap();
    assert!(!report.ok());
    assert_eq!(report.exit_code(), 2);
}

fn rationals<'a>(v: &'a Value, out: &mut Vec<&'a serde_json::Map<String, Value>>) {
    match v {
        Value::Object(m) if m.contains_key("num") && m.contains_key("decimal") => out.push(m),
        Value::Object(m) => m.values().for_each(|x| rationals(x, out)),
        Value::Array(a) => a.iter().for_each(|x| rationals(x, out)),
        _ => {}
    }
}

#[test]
fn machine_rationals_round_trip_through_their_decimals() {
    let opts = RunOptions {
        samples: Some(100),
        ..Default::default()
    };
    for src in [BUILTIN_B4, BUILTIN_C4] {
        let json: Value = serde_json::from_str(&render_machine(&run_source(src, &opts).unwrap())).unwrap();
        let mut found = Vec::new();
        rationals(&json, &mut found);
        assert!(found.len() > 20);
        for m in found {
            let exact = parse_rational(&format!("{}/{}", m["num"].as_str().unwrap(), m["den"].as_str().unwrap())).unwrap();
            assert_eq!(parse_repeating_decimal(m["decimal"].as_str().unwrap()).unwrap(), exact);
        }
    }
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_blowdown")).args(args).output().unwrap()
}

#[test]
fn cli_exit_codes() {
    assert_eq!(cli(&["run", "--builtin", "example-C4"]).status.code(), Some(0));
    assert_eq!(cli(&["verify-config", "--builtin", "example-B4"]).status.code(), Some(0));
    let wrong = cli(&["run", "--builtin", "example-B4", "--expect", "CP2#9-CP2"]);
    assert_eq!(wrong.status.code(), Some(2));
    let missing = cli(&["run", "/nonexistent/scenario.toml"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn cli_seed_override_is_reported() {
    let out = cli(&["run", "--builtin", "example-B4", "--format", "machine", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    let text = json.to_string();
    assert!(text.contains("\"seed\":7"), "{text}");
}
