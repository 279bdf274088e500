//! Machine-readable check records shared by the verification suites and the
//! CLI: every check carries an id, the statement it verifies, a three-way
//! verdict, and a witness when it fails.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

/// Tri-state outcome with payloads, used module-internally before assembly
/// into check records.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClauseOutcome {
    Pass,
    Fail { witness: String },
    Skipped { reason: String },
}

impl ClauseOutcome {
    pub fn is_fail(&self) -> bool {
        matches!(self, ClauseOutcome::Fail { .. })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    /// The property this check verifies, stated mathematically.
    pub statement: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skip_reason: Option<String>,
    /// Degree range over which the verdict is certified, when capped.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified_range: Option<(i64, i64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl CheckRecord {
    pub fn from_outcome(
        id: impl Into<String>,
        statement: impl Into<String>,
        outcome: ClauseOutcome,
    ) -> Self {
        let (verdict, witness, skip_reason) = match outcome {
            ClauseOutcome::Pass => (Verdict::Pass, None, None),
            ClauseOutcome::Fail { witness } => (Verdict::Fail, Some(witness), None),
            ClauseOutcome::Skipped { reason } => (Verdict::Skipped, None, Some(reason)),
        };
        CheckRecord {
            id: id.into(),
            statement: statement.into(),
            verdict,
            witness,
            skip_reason,
            certified_range: None,
            wall_ms: None,
        }
    }

    pub fn pass(id: impl Into<String>, statement: impl Into<String>) -> Self {
        Self::from_outcome(id, statement, ClauseOutcome::Pass)
    }

    pub fn fail(
        id: impl Into<String>,
        statement: impl Into<String>,
        witness: impl Into<String>,
    ) -> Self {
        Self::from_outcome(id, statement, ClauseOutcome::Fail { witness: witness.into() })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub input_digest: String,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new(input_digest: impl Into<String>, checks: Vec<CheckRecord>) -> Self {
        // a failing record must always explain itself
        debug_assert!(checks.iter().all(|c| c.verdict != Verdict::Fail || c.witness.is_some()));
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            input_digest: input_digest.into(),
            checks,
        }
    }

    pub fn has_failures(&self) -> bool {
        self.checks.iter().any(|c| c.verdict == Verdict::Fail)
    }

    /// Deterministic JSON: fixed field order, timings stripped unless asked
    /// for.
    pub fn to_json(&self, with_timing: bool) -> String {
        if with_timing {
            serde_json::to_string_pretty(self).expect("report serializes")
        } else {
            let mut stripped = self.clone();
            for c in &mut stripped.checks {
                c.wall_ms = None;
            }
            serde_json::to_string_pretty(&stripped).expect("report serializes")
        }
    }

    /// Human-readable one-line-per-check rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let verdict = match c.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Skipped => "SKIPPED",
            };
            out.push_str(&format!("{:<8} {}  — {}", verdict, c.id, c.statement));
            if let Some(w) = &c.witness {
                out.push_str(&format!("  [witness: {w}]"));
            }
            if let Some(r) = &c.skip_reason {
                out.push_str(&format!("  [{r}]"));
            }
            if let Some((lo, hi)) = c.certified_range {
                out.push_str(&format!("  [certified degrees {lo}..={hi}]"));
            }
            if let Some(ms) = c.wall_ms {
                out.push_str(&format!("  [{ms} ms]"));
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_deterministic_and_strips_timing() {
        let mut rec = CheckRecord::pass("a", "something holds");
        rec.wall_ms = Some(12);
        let report = Report::new("digest", vec![rec]);
        let a = report.to_json(false);
        let b = report.to_json(false);
        assert_eq!(a, b);
        assert!(!a.contains("wall_ms"));
        assert!(report.to_json(true).contains("wall_ms"));
    }

    #[test]
    fn empty_report_shape() {
        let report = Report::new("d", Vec::new());
        let json = report.to_json(false);
        assert!(json.contains("\"checks\": []"));
        assert!(!report.has_failures());
    }

    #[test]
    fn fail_records_carry_witnesses() {
        let report = Report::new("d", vec![CheckRecord::fail("x", "claim", "counterexample")]);
        assert!(report.has_failures());
        assert!(report.to_json(false).contains("counterexample"));
    }
}
