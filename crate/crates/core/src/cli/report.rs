//! Versioned run reports.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

/// One numeric result and the tolerance it was checked against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub expected: String,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// `|value − target| ≤ tol`.
    pub fn near(name: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            value,
            expected: format!("{target}"),
            tolerance: tol,
            pass: (value - target).abs() <= tol,
        }
    }

    /// `value ∈ [lo, hi]`; the tolerance is the half-width.
    pub fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Check {
            name: name.into(),
            value,
            expected: format!("in [{lo}, {hi}]"),
            tolerance: 0.5 * (hi - lo),
            pass: lo <= value && value <= hi,
        }
    }

    /// `value ≥ bound − tol`.
    pub fn at_least(name: impl Into<String>, value: f64, bound: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            value,
            expected: format!(">= {bound}"),
            tolerance: tol,
            pass: value >= bound - tol,
        }
    }

    /// `value ≤ bound + tol`.
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            value,
            expected: format!("<= {bound}"),
            tolerance: tol,
            pass: value <= bound + tol,
        }
    }

    /// Strict `lo < value < hi`, no tolerance.
    pub fn strictly_between(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Check {
            name: name.into(),
            value,
            expected: format!("in ({lo}, {hi})"),
            tolerance: 0.0,
            pass: lo < value && value < hi,
        }
    }

    /// A count that must be zero.
    pub fn zero(name: impl Into<String>, count: usize) -> Self {
        Check {
            name: name.into(),
            value: count as f64,
            expected: "0".into(),
            tolerance: 0.0,
            pass: count == 0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smoothing_radius: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quasi_state: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mesh: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack_slope: Option<f64>,
}

/// Numeric table with named columns, one row per level, ε or trial.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub params: Params,
    pub checks: Vec<Check>,
    pub table: Table,
    /// Offending cases, in a form `verify --replay` accepts.
    #[serde(default)]
    pub failures: Vec<serde_json::Value>,
    pub pass: bool,
    /// Wall-clock time; the only field allowed to differ between runs.
    pub timing_ms: f64,
}

impl RunReport {
    pub fn new(command: &str, params: Params) -> Self {
        RunReport {
            schema: SCHEMA,
            command: command.into(),
            params,
            checks: Vec::new(),
            table: Table::default(),
            failures: Vec::new(),
            pass: true,
            timing_ms: 0.0,
        }
    }

    pub fn check(&mut self, c: Check) {
        self.pass &= c.pass;
        self.checks.push(c);
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// One `PASS`/`FAIL` line per check.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{tag} {}: {} (expected {}, tol {})", c.name, c.value, c.expected, c.tolerance);
        }
        out
    }
}
