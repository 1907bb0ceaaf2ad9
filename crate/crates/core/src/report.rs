//! Structured verification records.

use std::fmt;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// Two printed variants disagree, or a printed value is off by a constant;
    /// the payload carries the computed arbitration. Never fails a run.
    Discrepancy,
    /// A value the printed formulas leave open, computed here.
    Derived,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Discrepancy => "DISCREPANCY",
            Verdict::Derived => "DERIVED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    #[serde(rename = "paper_anchor")]
    pub anchor: String,
    pub verdict: Verdict,
    pub payload: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<u64>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>, verdict: Verdict, payload: Value) -> Self {
        CheckRecord { name: name.into(), anchor: anchor.into(), verdict, payload, wall_clock_ms: None }
    }

    pub fn pass_or_fail(name: impl Into<String>, anchor: impl Into<String>, ok: bool, payload: Value) -> Self {
        let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
        Self::new(name, anchor, verdict, payload)
    }

    pub fn plumbing(name: impl Into<String>, verdict: Verdict, payload: Value) -> Self {
        Self::new(name, "plumbing", verdict, payload)
    }

    pub fn with_wall_clock(mut self, ms: u64) -> Self {
        self.wall_clock_ms = Some(ms);
        self
    }

    pub fn is_fail(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub tool_version: String,
    pub command: String,
    pub series: String,
    pub n: u32,
    pub backend: String,
    pub seeds: Vec<u64>,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new(command: &str, series: impl fmt::Display, n: u32, backend: impl fmt::Display, seeds: Vec<u64>) -> Self {
        VerificationReport {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            series: series.to_string(),
            n,
            backend: backend.to_string(),
            seeds,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.checks.push(record);
    }

    pub fn extend(&mut self, records: impl IntoIterator<Item = CheckRecord>) {
        self.checks.extend(records);
    }

    pub fn has_failures(&self) -> bool {
        self.checks.iter().any(CheckRecord::is_fail)
    }

    pub fn count(&self, verdict: Verdict) -> usize {
        self.checks.iter().filter(|c| c.verdict == verdict).count()
    }

    pub fn find<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a CheckRecord> + 'a {
        self.checks.iter().filter(move |c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn verdicts_serialize_uppercase() {
        let r = CheckRecord::new("x", "a", Verdict::Discrepancy, json!({}));
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"DISCREPANCY\""));
        assert!(!s.contains("wall_clock_ms"));
    }

    #[test]
    fn failures_are_counted() {
        let mut rep = VerificationReport::new("t", "so", 9, "rational", vec![1]);
        rep.push(CheckRecord::pass_or_fail("a", "b", true, Value::Null));
        rep.push(CheckRecord::new("c", "d", Verdict::Discrepancy, Value::Null));
        assert!(!rep.has_failures());
        rep.push(CheckRecord::pass_or_fail("e", "f", false, Value::Null));
        assert!(rep.has_failures());
        assert_eq!(rep.count(Verdict::Pass), 1);
        assert_eq!(rep.find("c").count(), 1);
    }
}
