//! Contract tests for the command-line binary: exit codes, the fan file
//! round trip, and byte-identical output across identical invocations.

use std::process::{Command, Output};

fn toric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn analyze_family_succeeds() {
    let out = toric(&["analyze", "--family", "pn", "--d", "4", "--k", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("positive"), "{text}");
}

#[test]
fn analyze_reports_not_nef_rank3() {
    let out = toric(&[
        "analyze", "--family", "batyrev3", "--p", "1,1,2,1,1", "--b", "0", "--c", "0", "--k",
        "2", "--json",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let report = &doc["reports"][0];
    assert_eq!(report["classification"], "not_nef");
    assert_eq!(report["min_value"], "-3/2");
}

#[test]
fn usage_errors_exit_2_without_partial_output() {
    for args in [
        vec!["analyze"],
        vec!["analyze", "--family", "nope", "--d", "3"],
        vec!["analyze", "--family", "pn"],
        vec!["analyze", "--family", "pn", "--d", "4", "--k", "9"],
        vec!["analyze", "--family", "pn", "--d", "4", "--file", "x.json"],
        vec!["scan", "--family", "pn", "--k", "0"],
        vec![
            "export-fan", "--family", "batyrev3", "--p", "1,1", "--b", "0",
        ],
    ] {
        let out = toric(&args);
        assert_eq!(out.status.code(), Some(2), "args: {args:?}");
        assert!(out.stdout.is_empty(), "partial output for {args:?}");
    }
}

#[test]
fn invalid_fan_input_exits_1() {
    let out = toric(&["analyze", "--file", "/definitely/not/here.json", "--k", "1"]);
    assert_eq!(out.status.code(), Some(1));

    let dir = std::env::temp_dir().join("toric-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("incomplete.json");
    std::fs::write(
        &path,
        r#"{"rank":2,"rays":[{"name":"a","vector":[1,0]},{"name":"b","vector":[0,1]}],"maximal_cones":[[0,1]]}"#,
    )
    .unwrap();
    let out = toric(&["analyze", "--file", path.to_str().unwrap(), "--k", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn export_then_analyze_round_trips() {
    let dir = std::env::temp_dir().join("toric-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("exported.json");
    let out = toric(&[
        "export-fan", "--family", "kleinschmidt", "--d", "4", "--s", "2", "--a", "1", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = toric(&["analyze", "--file", path.to_str().unwrap(), "--k", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("positive"), "{text}");
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let args = [
        "analyze", "--family", "batyrev3", "--p", "1,1,2,1,1", "--b", "1", "--c", "2", "--json",
        "--values",
    ];
    let first = toric(&args);
    let second = toric(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let args = [
        "scan", "--family", "example41", "--min-d", "3", "--max-d", "4", "--k", "2", "--json",
    ];
    let first = toric(&args);
    let second = toric(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn scan_streams_one_record_per_fan() {
    let out = toric(&[
        "scan", "--family", "pn", "--min-d", "2", "--max-d", "4", "--k", "2", "--json",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    // Three fans plus the trailing summary record.
    assert_eq!(lines.len(), 4);
    for line in &lines[..3] {
        let record: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(record["classification"], "positive");
    }
    let summary: serde_json::Value = serde_json::from_str(lines[3]).unwrap();
    assert_eq!(summary["total"], 3);
    assert_eq!(summary["summary"]["positive"], 3);
}

#[test]
fn verify_paper_runs_on_reduced_grid() {
    let out = toric(&[
        "verify-paper", "--max-p", "1", "--max-p2", "2", "--max-b", "1", "--max-c", "1",
        "--json",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let records: serde_json::Value = serde_json::from_str(&text).unwrap();
    let list = records.as_array().unwrap();
    assert_eq!(list.len(), 17);
    for r in list {
        assert_eq!(r["status"], "pass", "{r}");
    }
}
