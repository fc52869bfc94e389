use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/data/").to_string() + name
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_krein-frames"))
        .args(args)
        .env_remove("KREIN_FRAMES_SEED")
        .output()
        .expect("run CLI")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn temp_spec(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("krein-frames-{}-{name}.json", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn example_spec_passes_every_task() {
    let out = run(&["all", "--spec", &data("c3_example.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["passed"], Value::Bool(true));
    assert_eq!(report["seed"], 0);
    assert!(report["tasks"].as_array().unwrap().len() >= 10);
}

#[test]
fn certify_reports_bounds() {
    let out = run(&["certify", "--spec", &data("c3_example.json")]);
    let report = json(&out);
    let task = report["tasks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| t["target"] == "family:example")
        .expect("family task");
    assert_eq!(task["passed"], Value::Bool(true));
    let checks = task["checks"].as_array().unwrap();
    assert!(checks
        .iter()
        .any(|c| c["name"] == "estimate_sandwich" && c["passed"] == Value::Bool(true)));
}

#[test]
fn truncated_shift_fails_with_neutral_witness() {
    let out = run(&["preserve", "--spec", &data("l2_truncated.json")]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    let finding = &report["tasks"][0]["findings"][0];
    assert_eq!(finding["status"], "counterexample");
    let witness = finding["detail"]["counterexample"]["witness"].as_array().unwrap();
    let re: Vec<f64> = witness.iter().map(|z| z[0].as_f64().unwrap()).collect();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for (x, y) in re.iter().zip([h, h, 0.0, 0.0]) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn output_is_deterministic_and_seed_sensitive() {
    let spec = data("c3_example.json");
    let a = run(&["bounds", "--spec", &spec, "--seed", "7"]);
    let b = run(&["bounds", "--spec", &spec, "--seed", "7"]);
    let c = run(&["bounds", "--spec", &spec, "--seed", "8"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn environment_seed_is_used_without_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_krein-frames"))
        .args(["classify", "--spec", &data("c3_example.json")])
        .env("KREIN_FRAMES_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(json(&out)["seed"], 42);
    let out = Command::new(env!("CARGO_BIN_EXE_krein-frames"))
        .args(["classify", "--spec", &data("c3_example.json"), "--seed", "3"])
        .env("KREIN_FRAMES_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(json(&out)["seed"], 3);
}

#[test]
fn schema_and_validation_errors_exit_with_two() {
    let unknown = temp_spec("unknown", r#"{"space":{"dim":2,"J":[[1,0],[0,1]]},"bogus":1}"#);
    let out = run(&["certify", "--spec", unknown.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));

    let not_involutive = temp_spec("invol", r#"{"space":{"dim":3,"J":[[1,0,0],[1,0,0],[0,0,-1]]}}"#);
    let out = run(&["certify", "--spec", not_involutive.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let neutral = temp_spec(
        "neutral",
        r#"{"space":{"dim":2,"J":[[1,0],[0,-1]]},
            "families":{"f":{"members":[{"name":"n","basis":[[1,1]],"weight":1}]}}}"#,
    );
    let out = run(&["certify", "--spec", neutral.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["certify", "--spec", "/nonexistent/spec.json"]);
    assert_eq!(out.status.code(), Some(2));
    for p in [unknown, not_involutive, neutral] {
        let _ = std::fs::remove_file(p);
    }
}

#[test]
fn text_format_lists_tasks() {
    let out = run(&["classify", "--spec", &data("c3_example.json"), "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("classify"));
    assert!(text.lines().count() >= 2);
}

#[test]
fn identity_accepts_subsets() {
    let out = run(&[
        "identity",
        "--spec",
        &data("c3_example.json"),
        "--subset",
        "0,2",
        "--subset",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let checks = json(&out)["tasks"][0]["checks"].as_array().unwrap().len();
    assert_eq!(checks, 2);
    let out = run(&["identity", "--spec", &data("c3_example.json"), "--subset", "0,9"]);
    assert_ne!(out.status.code(), Some(0));
}
