//! End-to-end checks on the shiftlab binary: reruns of every subcommand are
//! byte-identical, the JSON envelope and CSV table layout are stable, and
//! each documented exit code fires on its documented trigger.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_shiftlab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("failed to spawn shiftlab")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("shiftlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("scratch dir");
    dir.join(name)
}

/// Runs with --out, asserts exit 0, and returns the report bytes.
fn report_bytes(args: &[&str], format: &str, name: &str) -> Vec<u8> {
    let path = scratch(name);
    let out = bin()
        .args(args)
        .arg("--format")
        .arg(format)
        .arg("--out")
        .arg(&path)
        .output()
        .expect("failed to spawn shiftlab");
    assert!(
        out.status.success(),
        "{args:?} ({format}) exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    std::fs::read(&path).expect("report file")
}

#[test]
fn c13_reruns_are_byte_identical() {
    let cases: &[(&str, &[&str])] = &[
        ("entropy", &["entropy", "--spec", "golden-mean", "--nmax", "12", "--seed", "7"]),
        (
            "independence",
            &["independence", "--spec", "golden-mean", "--n", "10", "--ix-nmax", "8", "--seed", "7"],
        ),
        ("weiss", &["weiss-verify", "--step", "2", "--horizon", "20", "--seed", "7"]),
        (
            "chaos",
            &[
                "chaos", "--spec", "weiss:step=2", "--pairs", "3", "--n", "2000", "--kmax", "3",
                "--fixture", "--seed", "7",
            ],
        ),
        (
            "densities",
            &[
                "densities", "--set", "even", "--spec", "golden-mean", "--horizon", "1000",
                "--kmax", "6", "--seed", "7",
            ],
        ),
    ];
    for (label, args) in cases {
        for format in ["json", "csv"] {
            let first = report_bytes(args, format, &format!("{label}-{format}-a"));
            let second = report_bytes(args, format, &format!("{label}-{format}-b"));
            assert!(!first.is_empty(), "{label} ({format}) produced an empty report");
            assert_eq!(first, second, "{label} ({format}) changed between reruns");
        }
    }
}

#[test]
fn stdout_matches_the_written_file() {
    let args = &["entropy", "--spec", "golden-mean", "--nmax", "10"];
    let file = report_bytes(args, "json", "stdout-cmp");
    let out = run(args);
    assert!(out.status.success());
    assert_eq!(out.stdout, file);
}

#[test]
fn json_envelope_shape_is_stable() {
    let out = run(&["entropy", "--spec", "full:2", "--nmax", "8", "--seed", "3"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid json");
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "entropy");
    assert_eq!(v["meta"]["spec"], "full:2");
    assert_eq!(v["meta"]["seed"], "3");
    let tables = v["tables"].as_array().expect("tables array");
    assert!(!tables.is_empty());
    for t in tables {
        let columns = t["columns"].as_array().expect("columns");
        for row in t["rows"].as_array().expect("rows") {
            assert_eq!(row.as_array().expect("row").len(), columns.len());
        }
    }
}

#[test]
fn csv_names_every_table_when_there_are_several() {
    let bytes = report_bytes(
        &["densities", "--set", "even", "--spec", "golden-mean", "--horizon", "1000", "--kmax", "4"],
        "csv",
        "densities-csv-shape",
    );
    let text = String::from_utf8(bytes).expect("utf-8 csv");
    assert!(text.starts_with("table:"), "multi-table csv must open with a table marker");
    assert!(text.contains("table:density"));
    assert!(text.contains("table:frequency_1"));
    assert!(text.contains("\n\n"), "tables are separated by a blank line");

    let single = report_bytes(&["weiss-verify", "--step", "2", "--horizon", "12"], "csv", "flat-csv");
    let single = String::from_utf8(single).expect("utf-8 csv");
    assert!(single.starts_with("suite,"), "single-table reports stay flat");
    assert!(!single.contains("table:"));
}

#[test]
fn exit_0_on_success() {
    let out = run(&["densities", "--set", "rotation:1/2", "--horizon", "500"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stderr.is_empty(), "clean runs keep stderr empty");
}

#[test]
fn exit_2_on_a_bad_descriptor() {
    let out = run(&["entropy", "--spec", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn exit_2_when_densities_gets_no_selector() {
    let out = run(&["densities"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_2_on_unknown_flags() {
    let out = run(&["entropy", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_3_when_the_cap_is_exceeded() {
    let out = run(&["entropy", "--spec", "golden-mean", "--nmax", "30", "--cap", "100000"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("budget") || err.contains("cap"), "stderr: {err}");
}

#[test]
fn exit_4_when_the_margin_leaves_no_entropy() {
    let out = run(&[
        "independence", "--spec", "weiss:step=2", "--n", "12", "--ix-nmax", "6", "--margin", "0.7",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("margin"));
}

#[test]
fn exit_5_writes_the_full_report_before_failing() {
    let path = scratch("verdict-fail.json");
    let out = bin()
        .args(["weiss-verify", "--step", "3", "--horizon", "12", "--out"])
        .arg(&path)
        .output()
        .expect("failed to spawn shiftlab");
    assert_eq!(out.status.code(), Some(5));
    let v: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&path).expect("report written despite the failure"))
            .expect("complete json");
    assert_eq!(v["schema"], 1);
    let verdicts = v["tables"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| t["name"] == "verdicts")
        .expect("verdicts table");
    let failed: Vec<&serde_json::Value> = verdicts["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|row| row[1] == false)
        .collect();
    assert!(!failed.is_empty(), "exit 5 implies at least one false verdict row");
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}
