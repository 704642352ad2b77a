use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::Result;

/// One side of a checked relation.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Num {
    Int(i128),
    Real(f64),
    Text(String),
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num::Int(v) => write!(f, "{v}"),
            Num::Real(v) => write!(f, "{v}"),
            Num::Text(v) => f.write_str(v),
        }
    }
}

impl From<f64> for Num {
    fn from(v: f64) -> Self {
        Num::Real(v)
    }
}

impl From<u128> for Num {
    fn from(v: u128) -> Self {
        i128::try_from(v).map_or_else(|_| Num::Text(v.to_string()), Num::Int)
    }
}

impl From<usize> for Num {
    fn from(v: usize) -> Self {
        Num::Int(v as i128)
    }
}

impl From<i64> for Num {
    fn from(v: i64) -> Self {
        Num::Int(v as i128)
    }
}

impl From<String> for Num {
    fn from(v: String) -> Self {
        Num::Text(v)
    }
}

impl From<&str> for Num {
    fn from(v: &str) -> Self {
        Num::Text(v.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Assertion {
    pub instance_id: String,
    pub quantity: String,
    pub lhs: Num,
    pub rhs: Num,
    pub relation: String,
    pub pass: bool,
}

impl Assertion {
    pub fn new(
        instance_id: impl Into<String>,
        quantity: impl Into<String>,
        lhs: impl Into<Num>,
        relation: &str,
        rhs: impl Into<Num>,
        pass: bool,
    ) -> Self {
        Self {
            instance_id: instance_id.into(),
            quantity: quantity.into(),
            lhs: lhs.into(),
            rhs: rhs.into(),
            relation: relation.to_string(),
            pass,
        }
    }

    pub fn le(id: impl Into<String>, quantity: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self::new(id, quantity, lhs, "<=", rhs, lhs <= rhs)
    }

    pub fn ge(id: impl Into<String>, quantity: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self::new(id, quantity, lhs, ">=", rhs, lhs >= rhs)
    }

    pub fn eq<T: Into<Num> + PartialEq>(id: impl Into<String>, quantity: impl Into<String>, lhs: T, rhs: T) -> Self {
        let pass = lhs == rhs;
        Self::new(id, quantity, lhs, "==", rhs, pass)
    }

    /// `|lhs − rhs| ≤ tol`.
    pub fn close(id: impl Into<String>, quantity: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let pass = (lhs - rhs).abs() <= tol;
        Self::new(id, quantity, lhs, &format!("~{tol:e}"), rhs, pass)
    }

    /// A yes/no property recorded as `holds == true`.
    pub fn holds(id: impl Into<String>, quantity: impl Into<String>, ok: bool) -> Self {
        Self::new(id, quantity, if ok { "true" } else { "false" }, "==", "true", ok)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub assertions: usize,
    pub failed: usize,
    pub passed: bool,
}

/// The deterministic part of a run: identical config and seed give
/// byte-identical serializations.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub experiment: String,
    pub seed: u64,
    pub config: Value,
    /// Formula labels for the quantities the run checks.
    pub anchors: Vec<String>,
    pub assertions: Vec<Assertion>,
    /// Same shape as assertions, recorded but never affecting the outcome.
    pub observations: Vec<Assertion>,
    pub data: Value,
    pub summary: Summary,
}

impl Report {
    pub fn new(experiment: &str, seed: u64, config: Value, anchors: &[&str]) -> Self {
        Self {
            experiment: experiment.to_string(),
            seed,
            config,
            anchors: anchors.iter().map(|s| s.to_string()).collect(),
            assertions: Vec::new(),
            observations: Vec::new(),
            data: Value::Null,
            summary: Summary {
                assertions: 0,
                failed: 0,
                passed: true,
            },
        }
    }

    pub fn check(&mut self, a: Assertion) {
        self.assertions.push(a);
    }

    pub fn observe(&mut self, a: Assertion) {
        self.observations.push(a);
    }

    /// Sorts records by instance and fills in the summary.
    pub fn finish(mut self, data: Value) -> Self {
        self.data = data;
        self.assertions.sort_by(|a, b| a.instance_id.cmp(&b.instance_id));
        self.observations.sort_by(|a, b| a.instance_id.cmp(&b.instance_id));
        let failed = self.assertions.iter().filter(|a| !a.pass).count();
        self.summary = Summary {
            assertions: self.assertions.len(),
            failed,
            passed: failed == 0,
        };
        self
    }

    pub fn passed(&self) -> bool {
        self.summary.passed
    }

    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    /// Hex SHA-256 of the compact JSON serialization.
    pub fn hash(&self) -> String {
        format!("{:x}", Sha256::digest(self.to_json().as_bytes()))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("experiment,instance_id,quantity,lhs,rhs,relation,pass\n");
        for a in &self.assertions {
            let row = [
                self.experiment.clone(),
                a.instance_id.clone(),
                a.quantity.clone(),
                a.lhs.to_string(),
                a.rhs.to_string(),
                a.relation.clone(),
                a.pass.to_string(),
            ];
            let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// The report plus the fields that vary between runs.
#[derive(Clone, Debug, Serialize)]
pub struct Envelope<'a> {
    pub report: &'a Report,
    pub hash: String,
    pub generated_at_unix: u64,
}

impl<'a> Envelope<'a> {
    pub fn new(report: &'a Report) -> Self {
        let now = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        Self {
            report,
            hash: report.hash(),
            generated_at_unix: now,
        }
    }
}

/// Writes `<experiment>.json` and `<experiment>.csv` under `dir`.
pub fn write_outputs(report: &Report, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(dir)?;
    let json = dir.join(format!("{}.json", report.experiment));
    let csv = dir.join(format!("{}.csv", report.experiment));
    std::fs::write(&json, serde_json::to_string_pretty(&Envelope::new(report))?)?;
    std::fs::write(&csv, report.to_csv())?;
    Ok((json, csv))
}
