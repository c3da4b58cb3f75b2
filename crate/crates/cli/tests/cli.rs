// End-to-end checks of the command line interface through the built binary.

use std::process::Command;

fn eis() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eis"))
}

#[test]
fn roots_subcommand_emits_the_documented_schema() {
    let out = eis().args(["roots", "--group", "G2"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let heights: Vec<i64> = v["heights"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_i64().unwrap())
        .collect();
    let mut sorted = heights.clone();
    sorted.sort();
    assert_eq!(sorted, vec![1, 1, 2, 3, 4, 5]);
    assert_eq!(v["exponents"].as_array().unwrap().len(), 2);
    assert!(v["cartan_matrix"].is_array());
    assert!(v["coroots"].is_array());
}

#[test]
fn orbits_subcommand_counts_records() {
    let out = eis().args(["orbits", "--group", "G2", "--json"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 5);
    let out = eis().args(["orbits", "--group", "A2"]).output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
}

#[test]
fn verify_main_suite_exits_zero_and_writes_reports() {
    let dir = std::env::temp_dir().join("eis-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let json_path = dir.join("report.json");
    let csv_path = dir.join("report.csv");
    let out = eis()
        .args([
            "verify",
            "--group",
            "A1",
            "--suite",
            "main",
            "--pairs",
            "4",
            "--json-out",
            json_path.to_str().unwrap(),
            "--csv-out",
            csv_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(report["passed"], serde_json::Value::Bool(true));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.lines().count() > 1);
    assert!(csv.starts_with("suite,case,identity"));
}

#[test]
fn unknown_group_is_a_usage_error() {
    let out = eis().args(["roots", "--group", "E8"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_config_reports_the_offending_file() {
    let dir = std::env::temp_dir().join("eis-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"group\": 7}").unwrap();
    let out = eis()
        .args(["--config", bad.to_str().unwrap(), "roots"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json"), "{err}");
}

#[test]
fn limit_subcommand_reports_monotone_convergence() {
    let out = eis().args(["limit", "--group", "A1"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["monotone"], serde_json::Value::Bool(true));
    assert_eq!(v["deltas"].as_array().unwrap().len(), 3);
}
