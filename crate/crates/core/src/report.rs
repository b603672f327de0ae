//! Check results and their canonical JSON and CSV renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
    /// Reported data that is never asserted.
    Info,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Inconclusive => "inconclusive",
            Outcome::Info => "info",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anchor: Option<String>,
    pub margin: f64,
    pub tolerance: f64,
    pub verdict: Outcome,
    pub witness: Value,
    pub details: Value,
}

impl CheckResult {
    /// Passes iff `margin <= tolerance`.
    pub fn asserted(suite: &str, id: impl Into<String>, margin: f64, tolerance: f64) -> Self {
        let verdict = if margin <= tolerance { Outcome::Pass } else { Outcome::Fail };
        Self::with_outcome(suite, id, margin, tolerance, verdict)
    }

    pub fn info(suite: &str, id: impl Into<String>, margin: f64) -> Self {
        Self::with_outcome(suite, id, margin, f64::INFINITY, Outcome::Info)
    }

    pub fn with_outcome(suite: &str, id: impl Into<String>, margin: f64, tolerance: f64, verdict: Outcome) -> Self {
        CheckResult {
            id: id.into(),
            suite: suite.to_owned(),
            anchor: None,
            margin,
            tolerance,
            verdict,
            witness: Value::Null,
            details: Value::Null,
        }
    }

    pub fn anchor(mut self, anchor: &str) -> Self {
        self.anchor = Some(anchor.to_owned());
        self
    }

    pub fn witness(mut self, witness: impl Serialize) -> Self {
        self.witness = serde_json::to_value(witness).unwrap_or(Value::Null);
        self
    }

    pub fn details(mut self, details: impl Serialize) -> Self {
        self.details = serde_json::to_value(details).unwrap_or(Value::Null);
        self
    }

    pub fn failed(&self) -> bool {
        self.verdict == Outcome::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub config: Value,
    pub checks: Vec<CheckResult>,
    /// Anchor id to the id of the check that carries it.
    pub anchors: BTreeMap<String, String>,
    pub summary: Summary,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
    pub info: usize,
}

impl Report {
    pub fn new(suite: &str, seed: u64, config: impl Serialize, checks: Vec<CheckResult>) -> Self {
        let mut anchors = BTreeMap::new();
        let mut summary = Summary::default();
        for c in &checks {
            if let Some(a) = &c.anchor {
                anchors.insert(a.clone(), c.id.clone());
            }
            match c.verdict {
                Outcome::Pass => summary.pass += 1,
                Outcome::Fail => summary.fail += 1,
                Outcome::Inconclusive => summary.inconclusive += 1,
                Outcome::Info => summary.info += 1,
            }
        }
        Report {
            suite: suite.to_owned(),
            seed,
            config: serde_json::to_value(config).unwrap_or(Value::Null),
            checks,
            anchors,
            summary,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.failed())
    }

    pub fn to_canonical_json(&self) -> String {
        canonical_json(&serde_json::to_value(self).expect("report serializes"))
    }

    /// `check,margin,tolerance,verdict`, one row per check.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,margin,tolerance,verdict\n");
        for c in &self.checks {
            let _ = writeln!(out, "{},{},{},{}", csv_field(&c.id), number(c.margin), number(c.tolerance), c.verdict.name());
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Compact JSON with object keys sorted and every float printed with 17
/// significant digits. Non-finite floats have already become `null`.
pub fn canonical_json(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value);
    out.push('\n');
    out
}

fn write_value(out: &mut String, value: &Value) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_i64() || n.is_u64() {
                out.push_str(&n.to_string());
            } else {
                out.push_str(&format!("{:.16e}", n.as_f64().expect("float")));
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            out.push('[');
            for (i, v) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(out, v);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write_value(out, &map[k]);
            }
            out.push('}');
        }
    }
}
