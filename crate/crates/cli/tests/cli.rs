//! End-to-end tests of the binary: flags, report formats, exit codes.

use std::process::Command;

fn glu2() -> Command {
    Command::new(env!("CARGO_BIN_EXE_glu2"))
}

#[test]
fn involutions_report_passes_and_parses() {
    let out = glu2()
        .args(["--kind", "gu2", "--p", "3", "--ell", "2", "--command", "involutions"])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["claims"][0]["expected"], 56);
    assert_eq!(report["claims"][0]["computed"], 56);
    assert_eq!(report["claims"][0]["pass"], true);
    assert_eq!(report["timing_ms"], serde_json::Value::Null);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("PASS"));
    assert!(stderr.contains("timing:"));
}

#[test]
fn census_csv_format() {
    let out = glu2()
        .args([
            "--kind", "gl2", "--p", "3", "--ell", "2", "--command", "census", "--format", "csv",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = String::from_utf8_lossy(&out.stdout);
    assert!(csv.starts_with("class,size,label,"));
    assert_eq!(csv.lines().count(), 1 + 78);
    assert!(csv.contains("M(d="));
}

#[test]
fn chartab_report_contains_indicators() {
    let out = glu2()
        .args(["--kind", "gl2", "--p", "3", "--ell", "1", "--command", "chartab"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let data = &report["data"];
    assert_eq!(data["degrees"].as_array().unwrap().len(), 8);
    assert!(data["fs_indicators"].as_array().is_some());
    assert!(data["complex_values"].as_array().is_some());
    // the fs aggregate claim is present and checks 14
    let claims = report["claims"].as_array().unwrap();
    assert!(claims
        .iter()
        .any(|c| c["id"].as_str().unwrap().starts_with("fs-aggregate") && c["expected"] == 14));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = glu2().args(["--command", "frobnicate"]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn out_file_written() {
    let dir = std::env::temp_dir().join(format!("glu2-cli-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = glu2()
        .args(["--kind", "gu2", "--ell", "1", "--command", "census"])
        .arg("--out")
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let body = std::fs::read_to_string(&path).unwrap();
    let report: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(report["config"]["kind"], "gu2");
    std::fs::remove_dir_all(&dir).ok();
}
