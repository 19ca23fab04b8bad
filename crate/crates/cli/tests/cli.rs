use std::io::Write;
use std::process::{Command, Output, Stdio};

use proptest::prelude::*;
use psisolve_cli::{recanonicalize, run, CliConfig, Command as Cmd};
use serde_json::Value;

fn psisolve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psisolve")).args(args).env_remove("PSISOLVE_SEED").output().unwrap()
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_psisolve"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn data_file(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn quantile_estimate_matches_hand_value() {
    let dir = tempfile::tempdir().unwrap();
    let d = data_file(&dir, "d.txt", "4 1 3 2");
    let out = psisolve(&["estimate", "--psi", "quantile:alpha=0.3", "--data", &d]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["kind"], "Point");
    assert!((v["location"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert_eq!(v["closed_form"], 2.0);
    let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
    for k in ["kind", "location", "bracket", "plateau", "closed_form", "agreement"] {
        assert!(keys.iter().any(|x| x == k), "missing {k}");
    }
}

#[test]
fn even_median_is_a_plateau_with_midpoint() {
    let out = with_stdin(&["estimate", "--psi", "median", "--data", "-"], "1 2\n");
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["kind"], "ZeroPlateau");
    let p = v["plateau"].as_array().unwrap();
    assert!((p[0].as_f64().unwrap() - 1.0).abs() < 1e-9 && (p[1].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert_eq!(v["closed_form"], 1.5);
    assert_eq!(v["location"], Value::Null);
}

#[test]
fn huber_pair_reproduction() {
    let out = psisolve(&["reproduce", "huber-T2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["expected"].as_str().unwrap().split(':').next(), Some("no-sign-change"));
    assert!(v["computed"].as_str().unwrap().starts_with("ZeroPlateau"));
    assert_eq!(v["matched"], true);
}

#[test]
fn csv_column_and_weights() {
    let dir = tempfile::tempdir().unwrap();
    let d = data_file(&dir, "d.csv", "x,y\n1,4\n2,5\n3,9\n");
    let w = data_file(&dir, "w.txt", "1 1 5");
    let out = psisolve(&["estimate", "--psi", "median", "--data", &d, "--csv-col", "1", "--weights", &w]);
    let v = json(&out);
    assert_eq!(v["kind"], "Point");
    assert!((v["location"].as_f64().unwrap() - 9.0).abs() < 1e-9);
    let first = psisolve(&["estimate", "--psi", "median", "--data", &d]);
    assert!((json(&first)["location"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn input_errors_exit_one_with_json_on_stderr() {
    let out = with_stdin(&["estimate", "--psi", "median", "--data", "-"], "1 abc");
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"], "parse-error");
    assert_eq!(e["token"], 2);
    for args in [
        vec!["estimate", "--psi", "nope", "--data", "-"],
        vec!["estimate", "--psi", "median"],
        vec!["estimate", "--psi", "median", "--data", "/nonexistent/file"],
        vec!["reproduce", "no-such-example"],
        vec!["verify", "--psi", "median", "--grid", "8"],
    ] {
        let out = with_stdin(&args, "1 2 3");
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let e: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert!(e["message"].is_string());
    }
    let e = psisolve(&["expectation", "--psi", "median", "--atoms", "1,2", "--probs", "0.5,0.6"]);
    assert_eq!(e.status.code(), Some(1));
}

#[test]
fn violated_verdict_is_a_successful_run() {
    let dir = tempfile::tempdir().unwrap();
    let d = data_file(&dir, "xy.txt", "1 5");
    let out = psisolve(&["verify", "--psi", "normal-mixture:sigma=1", "--data", &d]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<Value> =
        std::str::from_utf8(&out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[1]["verdict"], "violated");
    assert!(!lines[1]["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn expectation_from_flags_and_file() {
    let flags = psisolve(&["expectation", "--psi", "bajraktarevic:cube", "--atoms", "1,2,3", "--probs", "0.2,0.3,0.5"]);
    let v = json(&flags);
    let expected = (0.2f64 + 0.3 * 8.0 + 0.5 * 27.0).cbrt();
    assert!((v["location"].as_f64().unwrap() - expected).abs() < 1e-8);
    let dir = tempfile::tempdir().unwrap();
    let d = data_file(&dir, "dist.csv", "atom,prob\n1,0.2\n2,0.3\n3,0.5\n");
    assert_eq!(json(&psisolve(&["expectation", "--psi", "bajraktarevic:cube", "--data", &d])), v);
}

#[test]
fn seed_flag_beats_environment() {
    let flag = psisolve(&["reproduce", "all", "--seed", "7"]);
    let env = Command::new(env!("CARGO_BIN_EXE_psisolve")).args(["reproduce", "all"]).env("PSISOLVE_SEED", "7").output().unwrap();
    let both = Command::new(env!("CARGO_BIN_EXE_psisolve"))
        .args(["reproduce", "all", "--seed", "7"])
        .env("PSISOLVE_SEED", "11")
        .output()
        .unwrap();
    let default = psisolve(&["reproduce", "all"]);
    assert_eq!(flag.stdout, env.stdout);
    assert_eq!(flag.stdout, both.stdout);
    assert_ne!(flag.stdout, default.stdout);
    assert_eq!(flag.status.code(), Some(0));
    assert_eq!(std::str::from_utf8(&flag.stdout).unwrap().lines().count(), 6);
}

#[test]
fn list_families_in_both_formats() {
    let out = psisolve(&["list-families"]);
    let specs: Vec<Value> = std::str::from_utf8(&out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(specs.len() >= 14);
    assert!(specs.iter().any(|s| s["syntax"].as_str().unwrap().starts_with("quantile")));
    let table = psisolve(&["list-families", "--format", "table"]);
    assert!(std::str::from_utf8(&table.stdout).unwrap().starts_with("syntax"));
}

#[test]
fn every_json_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let d = data_file(&dir, "d.txt", "0.1 -3 7.25 1e-7 12");
    let runs = [
        psisolve(&["estimate", "--psi", "mathieu:catoni:b=2", "--data", &d]),
        psisolve(&["verify", "--psi", "expectile:alpha=0.7"]),
        psisolve(&["reproduce", "all"]),
        psisolve(&["list-families"]),
    ];
    for out in runs {
        for line in std::str::from_utf8(&out.stdout).unwrap().lines() {
            assert_eq!(recanonicalize(line).unwrap(), line);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn estimate_json_round_trips(points in prop::collection::vec(-1e6f64..1e6, 1..12), alpha in 0.01f64..0.99) {
        let dir = tempfile::tempdir().unwrap();
        let text: Vec<String> = points.iter().map(|p| format!("{p:e}")).collect();
        let d = data_file(&dir, "d.txt", &text.join("\n"));
        let mut c = CliConfig::new(Cmd::Estimate);
        c.family_spec = Some(format!("quantile:alpha={alpha}"));
        c.data_path = Some(d);
        let out = run(&c);
        prop_assert_eq!(out.status, 0);
        let line = out.stdout.trim_end();
        prop_assert_eq!(recanonicalize(line).unwrap(), line);
        prop_assert_eq!(run(&c), out);
    }
}
