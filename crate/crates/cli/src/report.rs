//! Report assembly and rendering.
//!
//! A report is the canonical output of every subcommand: a config echo
//! plus a sorted list of records, each an (expected, got) pair compared
//! for exact string equality. Rendering is deterministic, so a fixed
//! (config, seed, version) always produces byte-identical stdout;
//! anything transient (timing, cache status) goes to stderr.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// One computed or checked statement.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Record {
    pub name: String,
    pub params: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

impl Record {
    /// A genuine check: passes iff the two sides agree exactly.
    pub fn check(name: &str, params: &str, expected: String, got: String) -> Record {
        Record {
            name: name.to_string(),
            params: params.to_string(),
            pass: expected == got,
            expected,
            got,
        }
    }

    /// A computed value with nothing to compare against; always passes.
    pub fn value(name: &str, params: &str, got: String) -> Record {
        Record {
            name: name.to_string(),
            params: params.to_string(),
            expected: got.clone(),
            got,
            pass: true,
        }
    }
}

/// The full output of one subcommand invocation.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub records: Vec<Record>,
    pub all_pass: bool,
}

impl Report {
    pub fn new(command: &str, config: BTreeMap<String, String>, records: Vec<Record>) -> Report {
        let all_pass = records.iter().all(|r| r.pass);
        Report {
            tool: "dmct".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            records,
            all_pass,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("name,params,expected,got,pass\n");
            for r in &report.records {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    csv_field(&r.name),
                    csv_field(&r.params),
                    csv_field(&r.expected),
                    csv_field(&r.got),
                    r.pass
                ));
            }
            s
        }
        Format::Text => {
            let mut s = format!("{} {} {}\n", report.tool, report.version, report.command);
            for (k, v) in &report.config {
                s.push_str(&format!("  {k} = {v}\n"));
            }
            for r in &report.records {
                let status = if r.pass { "pass" } else { "FAIL" };
                if r.expected == r.got {
                    s.push_str(&format!("{status} {} [{}]: {}\n", r.name, r.params, r.got));
                } else {
                    s.push_str(&format!(
                        "{status} {} [{}]: expected {}, got {}\n",
                        r.name, r.params, r.expected, r.got
                    ));
                }
            }
            let failed = report.records.iter().filter(|r| !r.pass).count();
            s.push_str(&format!(
                "{} records, {} failed\n",
                report.records.len(),
                failed
            ));
            s
        }
    }
}

/// Quote a CSV field when it contains a delimiter, quote, or newline.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting_handles_delimiters_and_quotes() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("[16,8,8]"), "\"[16,8,8]\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn rendering_is_deterministic() {
        let mut config = BTreeMap::new();
        config.insert("q".to_string(), "2".to_string());
        config.insert("p".to_string(), "T".to_string());
        let records = vec![
            Record::check("a", "x=1", "5".into(), "5".into()),
            Record::value("b", "", "[16,8,8]".into()),
        ];
        let report = Report::new("demo", config, records);
        assert!(report.all_pass);
        for format in [Format::Json, Format::Csv, Format::Text] {
            assert_eq!(render(&report, format), render(&report, format));
        }
        let json = render(&report, Format::Json);
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn a_failing_record_clears_the_pass_flag() {
        let report = Report::new(
            "demo",
            BTreeMap::new(),
            vec![Record::check("a", "", "1".into(), "2".into())],
        );
        assert!(!report.all_pass);
        assert!(render(&report, Format::Text).contains("FAIL"));
    }
}
