use std::process::{Command, Output};

use serde_json::Value;

fn icg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_icg"))
        .args(args)
        .env_remove("ICG_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn first_line(args: &[&str]) -> String {
    let out = icg(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    stdout(&out).lines().next().unwrap_or_default().to_string()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = icg(&full);
    assert_eq!(out.status.code(), Some(0), "{args:?}");
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], 1, "{args:?}");
    v
}

#[test]
fn diameter_examples() {
    assert_eq!(first_line(&["diameter", "12", "3,4"]), "3");
    assert_eq!(first_line(&["diameter", "540", "45,20,108"]), "5");
    assert_eq!(first_line(&["diameter", "12", "2,4"]), "infinite (disconnected)");
}

#[test]
fn diameter_json_has_a_shortest_path() {
    let v = json(&["diameter", "540", "45,20,108"]);
    assert_eq!(v["result"]["value"], 5);
    let path = v["result"]["witness_path"].as_array().unwrap();
    assert_eq!(path.len(), 6);
    assert_eq!(path.last().unwrap(), &v["result"]["witness_vertex"]);
    assert_eq!(json(&["diameter", "12", "2,4"])["result"]["value"], "infinite");
}

#[test]
fn predict_examples() {
    assert!(first_line(&["predict", "540"]).starts_with("5 "));
    assert!(first_line(&["predict", "210", "--t", "2"]).starts_with("5 "));
    assert!(first_line(&["predict", "6"]).starts_with("3 "));
    let v = json(&["predict", "6", "--t", "3"]);
    assert_eq!(v["prediction"]["applicable"], false);
}

#[test]
fn verify_exit_codes_and_csv() {
    assert_eq!(icg(&["verify", "540..540"]).status.code(), Some(0));
    let out = icg(&["verify", "2..10", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,t,predicted,observed,status"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.iter().all(|r| r.ends_with(",MATCH")));
    assert!(rows.iter().any(|r| r.starts_with("6,1,")) && rows.iter().any(|r| r.starts_with("6,2,")));
    let v = json(&["verify", "2..30"]);
    assert_eq!(v["mismatch_count"], 0);
    assert_eq!(v["orders_checked"], 29);
}

#[test]
fn usage_and_validation_errors_exit_two() {
    let out = icg(&["diameter", "12", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("[5]"));
    assert_eq!(icg(&["verify", "10..2"]).status.code(), Some(2));
    assert_eq!(icg(&["verify", "2-10"]).status.code(), Some(2));
    assert_eq!(icg(&["predict"]).status.code(), Some(2));
    assert_eq!(icg(&["worst-vertex", "12", "1", "--variant", "III"]).status.code(), Some(2));
}

#[test]
fn wrappers() {
    assert_eq!(first_line(&["worst-vertex", "540", "45,20,108", "--variant", "I"]), "354");
    assert_eq!(first_line(&["pst", "8", "1,2"]), "admissible");
    let v = json(&["pst", "8", "1,2"]);
    assert_eq!(v["decomposition"]["hub"], 2);
    assert_eq!(first_line(&["pst", "8", "1"]), "not admissible");
    assert_eq!(first_line(&["family", "saxena", "3,5"]), "n=450 D=9,25 predicted 5");
    let v = json(&["enumerate", "12", "--separated"]);
    assert_eq!(v["sets"], serde_json::json!([[1], [2, 3], [3, 4]]));
    assert_eq!(first_line(&["extremal", "540", "45,20,108"]), "attains bound 5 (condition square_valuations)");
}

#[test]
fn profile_csv_lists_every_vertex() {
    let out = icg(&["--format", "csv", "profile", "12", "3,4"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 13);
    assert!(text.contains("\n2,3\n"));
}

#[test]
fn environment_overrides_format() {
    let out = Command::new(env!("CARGO_BIN_EXE_icg"))
        .args(["predict", "12"])
        .env("ICG_FORMAT", "json")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["prediction"]["value"], 3);
}

#[test]
fn output_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("icg-cli-test-{}.json", std::process::id()));
    let out = icg(&["--format", "json", "--output", path.to_str().unwrap(), "transitivity", "30"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(v["failures"], serde_json::json!([]));
}
