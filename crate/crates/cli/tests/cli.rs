//! End-to-end behavior of the `dmct` binary: documented example outputs,
//! exit codes, output formats, determinism, and the result cache.

use std::path::Path;
use std::process::{Command, Output};

fn dmct(cache_dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dmct"))
        .env("DMCT_CACHE_DIR", cache_dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn record_got(report: &serde_json::Value, name: &str) -> String {
    report["records"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["name"] == name)
        .unwrap_or_else(|| panic!("no record named {name}"))["got"]
        .as_str()
        .unwrap()
        .to_string()
}

#[test]
fn documented_examples_produce_their_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = dmct(
        dir.path(),
        &["class-group", "--q", "2", "--p", "T^2+T+1", "--r", "2"],
    );
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(record_got(&report, "invariant-factors"), "[5]");
    assert_eq!(report["all_pass"], true);

    let out = dmct(
        dir.path(),
        &[
            "eval",
            "--cochain",
            "delta:i=0",
            "--edge",
            "k=3;y=pi^1;eps=1",
            "--q",
            "2",
            "--p",
            "T",
            "--r",
            "2",
        ],
    );
    assert!(out.status.success());
    assert_eq!(record_got(&stdout_json(&out), "eval"), "1");

    // The pushforward cokernel has floor(r/2) - 1 cyclic factors of
    // order |p|; at (q=2, p=T, r=5) that is a single factor of order 2.
    let out = dmct(
        dir.path(),
        &["degeneracy", "--op", "beta-cokernel", "--q", "2", "--p", "T", "--r", "5"],
    );
    assert!(out.status.success());
    assert_eq!(record_got(&stdout_json(&out), "beta-cokernel"), "[2]");
}

#[test]
fn further_subcommands_cover_their_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let out = dmct(dir.path(), &["cusps", "--q", "2", "--p", "T", "--r", "3"]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    // Heights 0..=3 count 1, 1, 1, 1 over q=2, p=T, r=3.
    for i in 0..=3 {
        let got: Vec<String> = report["records"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|r| r["name"] == "count" && r["params"] == format!("height={i}"))
            .map(|r| r["got"].as_str().unwrap().to_string())
            .collect();
        assert_eq!(got, vec!["1".to_string()]);
    }

    let out = dmct(
        dir.path(),
        &[
            "hecke", "--cochain", "delta:i=1", "--op", "U", "--edge", "k=3;y=pi^1;eps=0",
            "--q", "2", "--p", "T", "--r", "2",
        ],
    );
    assert!(out.status.success());
    assert_eq!(record_got(&stdout_json(&out), "hecke"), "-2");

    let out = dmct(dir.path(), &["eisenstein", "--q", "2", "--p", "T", "--r", "2"]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(record_got(&report, "constants"), "M=1 N=1");
    assert_eq!(record_got(&report, "unit-coefficient"), "1");
    assert_eq!(report["all_pass"], true);

    let out = dmct(
        dir.path(),
        &["degeneracy", "--op", "up", "--delta", "1", "--q", "2", "--p", "T", "--r", "3"],
    );
    assert!(out.status.success());
}

#[test]
fn bad_input_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        // Composite p is rejected.
        vec!["class-group", "--q", "2", "--p", "T^2+1", "--r", "2"],
        // Unknown cochain selector.
        vec!["eval", "--cochain", "zeta", "--edge", "k=2;y=0;eps=0"],
        // Malformed edge literal.
        vec!["eval", "--cochain", "En", "--edge", "k=two"],
        // Depth below the minimum.
        vec!["cusps", "--depth", "3"],
        // Unknown suite name.
        vec!["verify", "--suite", "geometry"],
        // Unknown Hecke operator.
        vec!["hecke", "--cochain", "En", "--op", "W", "--edge", "k=2;y=0;eps=0"],
        // q must be prime without a modulus.
        vec!["cusps", "--q", "6"],
    ];
    for args in cases {
        let out = dmct(dir.path(), &args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "args {:?} → stderr {}",
            args,
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stderr.is_empty(), "args {args:?} should explain the error");
    }
}

#[test]
fn tampered_expectation_fails_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dmct(dir.path(), &["verify", "--suite", "algebra", "--expect-fail"]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["all_pass"], false);
    let canary = report["records"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["name"] == "mutation-canary")
        .expect("canary record present");
    assert_eq!(canary["pass"], false);
}

#[test]
fn reports_are_byte_identical_and_cached() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["class-group", "--q", "3", "--p", "T", "--r", "2"];
    let first = dmct(dir.path(), &args);
    assert!(first.status.success());
    let second = dmct(dir.path(), &args);
    assert!(second.status.success());
    assert_eq!(first.stdout, second.stdout, "stdout must not vary across runs");
    let second_err = String::from_utf8_lossy(&second.stderr);
    assert!(
        second_err.contains("served from cache"),
        "second run should be flagged: {second_err}"
    );

    // A config change is a cache miss.
    let other = dmct(dir.path(), &["class-group", "--q", "3", "--p", "T", "--r", "3"]);
    assert!(!String::from_utf8_lossy(&other.stderr).contains("served from cache"));

    // Corrupting the entry forces a warned recompute with the same bytes.
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        std::fs::write(entry.unwrap().path(), "{ mangled").unwrap();
    }
    let third = dmct(dir.path(), &args);
    assert!(third.status.success());
    assert_eq!(first.stdout, third.stdout);
    assert!(String::from_utf8_lossy(&third.stderr).contains("recomputing"));

    // --no-cache bypasses reads and writes.
    let fresh = tempfile::tempdir().unwrap();
    let bypass = dmct(fresh.path(), &["class-group", "--q", "3", "--p", "T", "--r", "2", "--no-cache"]);
    assert!(bypass.status.success());
    assert_eq!(first.stdout, bypass.stdout);
    assert_eq!(std::fs::read_dir(fresh.path()).unwrap().count(), 0);
}

#[test]
fn formats_render_as_requested() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["class-group", "--q", "2", "--p", "T", "--r", "5"];

    let csv = dmct(dir.path(), &[&base[..], &["--format", "csv"]].concat());
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("name,params,expected,got,pass\n"));
    assert!(
        text.contains("\"[16,8,8]\""),
        "fields with commas are quoted in CSV: {text}"
    );

    let plain = dmct(dir.path(), &[&base[..], &["--format", "text"]].concat());
    let text = String::from_utf8(plain.stdout).unwrap();
    assert!(text.contains("invariant-factors"));
    assert!(text.trim_end().ends_with("0 failed"));

    // The same config is one cache entry across formats.
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn extension_fields_are_reachable_with_a_modulus() {
    let dir = tempfile::tempdir().unwrap();
    let out = dmct(
        dir.path(),
        &["cusps", "--q", "4", "--modulus", "x^2+x+1", "--p", "T", "--r", "2"],
    );
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = stdout_json(&out);
    assert_eq!(report["config"]["modulus"], "x^2+x+1");
}
