//! Check reports and their human rendering.
//!
//! The JSON form is the reference; the text form is rendered from it.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub trials: usize,
    pub failures: usize,
    pub max_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub seed: u64,
    /// Wall time, recorded only on request since it breaks replay equality.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    /// Input of the first failing trial, or a certificate for the verdict.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl Report {
    pub fn new(check: &str, seed: u64) -> Self {
        Report {
            check: check.to_string(),
            field: None,
            n: None,
            trials: 0,
            failures: 0,
            max_residual: 0.0,
            tolerance: None,
            seed,
            elapsed_ms: None,
            witness: None,
            detail: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub seed: u64,
    pub passed: bool,
    pub reports: Vec<Report>,
}

impl RunReport {
    pub fn new(command: &str, seed: u64, reports: Vec<Report>) -> Self {
        let passed = reports.iter().all(Report::passed);
        RunReport { command: command.to_string(), seed, passed, reports }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only finite numbers and strings")
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            let status = if r.passed() { "PASS" } else { "FAIL" };
            let mut scope = String::new();
            if let Some(f) = &r.field {
                scope.push_str(f);
            }
            if let Some(n) = r.n {
                if !scope.is_empty() {
                    scope.push(' ');
                }
                let _ = write!(scope, "n={n}");
            }
            if !scope.is_empty() {
                scope = format!(" [{scope}]");
            }
            let _ = write!(
                out,
                "{status} {}{scope}: {} trials, {} failures, max residual {:.3e}",
                r.check, r.trials, r.failures, r.max_residual
            );
            if let Some(ms) = r.elapsed_ms {
                let _ = write!(out, ", {ms} ms");
            }
            out.push('\n');
            if let Some(d) = &r.detail {
                render_value(&mut out, d, 1);
            }
            if let Some(w) = &r.witness {
                let _ = writeln!(out, "  witness:");
                render_value(&mut out, w, 2);
            }
        }
        let _ = writeln!(
            out,
            "{}: {} of {} checks passed (seed {})",
            self.command,
            self.reports.iter().filter(|r| r.passed()).count(),
            self.reports.len(),
            self.seed
        );
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Strings, numbers and arrays of them print on one line.
fn is_inline(v: &Value) -> bool {
    match v {
        Value::Object(_) => false,
        Value::Array(a) => a.iter().all(|x| !x.is_object() && !x.is_array()),
        _ => true,
    }
}

fn render_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if is_inline(x) {
                    let _ = writeln!(out, "{pad}{k}: {}", scalar(x));
                } else {
                    let _ = writeln!(out, "{pad}{k}:");
                    render_value(out, x, depth + 1);
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match x {
                    Value::Object(m) if m.values().all(is_inline) => {
                        let fields: Vec<String> = m.iter().map(|(k, y)| format!("{k}={}", scalar(y))).collect();
                        let _ = writeln!(out, "{pad}{}", fields.join("  "));
                    }
                    x if is_inline(x) => {
                        let _ = writeln!(out, "{pad}{}", scalar(x));
                    }
                    x => {
                        render_value(out, x, depth);
                        let _ = writeln!(out, "{pad}--");
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other));
        }
    }
}
