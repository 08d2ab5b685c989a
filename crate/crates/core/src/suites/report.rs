//! Report types and their renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One failed exact-equality check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MismatchRecord {
    pub suite: String,
    pub instance: Value,
    pub n: u64,
    /// Oracle value.
    pub expected: String,
    /// Closed-form value.
    pub actual: String,
    pub conventions: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FindingStatus {
    /// The printed statement fails; a corrected form agrees with the oracle.
    Corrected,
    /// The printed statement agrees with the oracle.
    Holds,
    /// No reading tried agrees with the oracle.
    Open,
}

/// Errata ledger entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Finding {
    pub id: String,
    /// The formula as printed.
    pub printed: String,
    /// What the oracle computation shows.
    pub observed: String,
    /// Form adopted by this implementation.
    pub adopted: String,
    pub status: FindingStatus,
    /// Smallest instance separating printed and adopted forms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: u64,
    pub passed: u64,
    pub failed: u64,
    pub mismatches: Vec<MismatchRecord>,
    pub findings: Vec<Finding>,
    /// Comparison tables produced by reconciliation suites.
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub reports: Value,
}

impl SuiteReport {
    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed > 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn parse(text: &str) -> Option<Format> {
        match text {
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            "text" => Some(Format::Text),
            _ => None,
        }
    }
}

/// Renders a report; output depends only on the report.
pub fn render(report: &SuiteReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["suite", "n", "expected", "actual", "conventions", "instance"]).expect("in memory");
            for m in &report.mismatches {
                w.write_record([
                    m.suite.as_str(),
                    &m.n.to_string(),
                    &m.expected,
                    &m.actual,
                    &m.conventions.join(";"),
                    &m.instance.to_string(),
                ])
                .expect("in memory");
            }
            String::from_utf8(w.into_inner().expect("in memory")).expect("utf-8")
        }
        Format::Text => {
            let mut s = String::new();
            let verdict = if report.failed == 0 { "ok" } else { "FAILED" };
            let _ = writeln!(
                s,
                "suite {}: {verdict} ({} cases, {} checks passed, {} failed)",
                report.suite, report.cases, report.passed, report.failed
            );
            for m in &report.mismatches {
                let _ = writeln!(s, "  mismatch n={}: expected {} got {}", m.n, m.expected, m.actual);
            }
            for f in &report.findings {
                let _ = writeln!(s, "  finding {} [{}]: {}", f.id, status_name(f.status), f.observed);
            }
            s
        }
    }
}

fn status_name(status: FindingStatus) -> &'static str {
    match status {
        FindingStatus::Corrected => "corrected",
        FindingStatus::Holds => "holds",
        FindingStatus::Open => "open",
    }
}

/// Markdown rendering of the errata ledger.
pub fn render_errata_markdown(findings: &[Finding]) -> String {
    let mut s = String::from(
        "# Errata\n\nGenerated by `seqlab docs errata`. Every entry is recomputed from the oracles on each run.\n",
    );
    for f in findings {
        let _ = write!(
            s,
            "\n## {}\n\n- Status: {}\n- Printed: `{}`\n- Observed: {}\n- Adopted: `{}`\n",
            f.id,
            status_name(f.status),
            f.printed,
            f.observed,
            f.adopted
        );
        if let Some(c) = &f.counterexample {
            let _ = writeln!(s, "- Counterexample: {c}");
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SuiteReport {
        SuiteReport {
            suite: "thm1".into(),
            cases: 2,
            passed: 3,
            failed: 1,
            mismatches: vec![MismatchRecord {
                suite: "thm1".into(),
                instance: serde_json::json!({"x1": "1/2"}),
                n: 4,
                expected: "1, 2".into(),
                actual: "3".into(),
                conventions: vec!["a".into(), "b".into()],
            }],
            findings: vec![Finding {
                id: "x".into(),
                printed: "p".into(),
                observed: "o".into(),
                adopted: "a".into(),
                status: FindingStatus::Open,
                counterexample: None,
            }],
            reports: Value::Null,
        }
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let back: SuiteReport = serde_json::from_str(&render(&r, Format::Json)).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn csv_quotes_fields() {
        let text = render(&sample(), Format::Csv);
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
        assert_eq!(rows.len(), 1);
        assert_eq!(&rows[0][2], "1, 2");
        assert_eq!(&rows[0][5], r#"{"x1":"1/2"}"#);
    }

    #[test]
    fn markdown_lists_findings() {
        let md = render_errata_markdown(&sample().findings);
        assert!(md.contains("## x"));
        assert!(md.contains("- Status: open"));
    }
}
