//! Report document: flat identity keys plus the individual checks.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::config::{Format, RunConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `|lhs - rhs| <= tolerance`
    Eq,
    /// `lhs >= rhs - tolerance`
    Ge,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_diff: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn eq(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Check {
        Check::eq_with_diff(name, lhs, rhs, (lhs - rhs).abs(), tolerance)
    }

    /// Equality under a caller-supplied distance (e.g. on the projective line).
    pub fn eq_with_diff(
        name: impl Into<String>,
        lhs: f64,
        rhs: f64,
        diff: f64,
        tolerance: f64,
    ) -> Check {
        Check {
            name: name.into(),
            relation: Relation::Eq,
            lhs,
            rhs,
            abs_diff: diff,
            tolerance,
            // NaN compares false, so it never passes
            pass: diff <= tolerance,
        }
    }

    pub fn ge(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Check {
        Check {
            name: name.into(),
            relation: Relation::Ge,
            lhs,
            rhs,
            abs_diff: (lhs - rhs).abs(),
            tolerance,
            pass: lhs >= rhs - tolerance,
        }
    }

    /// Fraction of the tolerance used; anything above 1 fails.
    fn severity(&self) -> f64 {
        let excess = match self.relation {
            Relation::Eq => self.abs_diff,
            Relation::Ge => (self.rhs - self.lhs).max(0.0),
        };
        if excess.is_nan() {
            f64::INFINITY
        } else {
            excess / self.tolerance
        }
    }
}

/// Shortest round-trip representation, switching to exponent form for
/// very small or large magnitudes.
fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// One row of the branch table written by `regions`.
#[derive(Clone, Debug, Serialize)]
pub struct BranchRow {
    pub p: f64,
    pub j: usize,
    pub theta: f64,
    pub deriv: f64,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: RunConfig,
    /// The word or matrices actually used, row-major.
    pub word: Vec<[f64; 4]>,
    /// Sides of the check closest to (or furthest past) its tolerance.
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub abs_diff: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
    pub error_estimates: BTreeMap<String, f64>,
    pub values: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub branches: Vec<BranchRow>,
    pub wall_time_s: f64,
}

impl Report {
    pub fn new(inputs: RunConfig, word: Vec<[f64; 4]>) -> Report {
        Report {
            command: serde_json::to_value(inputs.command)
                .ok()
                .and_then(|v| v.as_str().map(str::to_owned))
                .unwrap_or_default(),
            inputs,
            word,
            lhs: None,
            rhs: None,
            abs_diff: None,
            tolerance: None,
            pass: true,
            error_estimates: BTreeMap::new(),
            values: BTreeMap::new(),
            checks: Vec::new(),
            branches: Vec::new(),
            wall_time_s: 0.0,
        }
    }

    pub fn value(&mut self, key: &str, v: impl Serialize) {
        self.values.insert(
            key.to_owned(),
            serde_json::to_value(v).unwrap_or(Value::Null),
        );
    }

    pub fn estimate(&mut self, key: &str, v: f64) {
        self.error_estimates.insert(key.to_owned(), v);
    }

    /// Sets `pass` and the headline fields from the recorded checks.
    pub fn finish(&mut self) {
        self.pass = self.checks.iter().all(|c| c.pass);
        let worst = self
            .checks
            .iter()
            .enumerate()
            .max_by(|(i, a), (j, b)| a.severity().total_cmp(&b.severity()).then(j.cmp(i)))
            .map(|(_, c)| c);
        if let Some(c) = worst {
            self.lhs = Some(c.lhs);
            self.rhs = Some(c.rhs);
            self.abs_diff = Some(c.abs_diff);
            self.tolerance = Some(c.tolerance);
        }
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, self)?;
                writeln!(out)
            }
            Format::Csv if !self.branches.is_empty() => self.write_regions_csv(out),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                for c in &self.checks {
                    w.serialize(c)?;
                }
                w.flush()
            }
        }
    }

    /// Branch rows, then one summary row carrying the elliptic-set estimates.
    fn write_regions_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "kind",
            "p",
            "j",
            "theta",
            "deriv",
            "elliptic_by_rho",
            "elliptic_by_branches",
            "discrepancy",
        ])?;
        for r in &self.branches {
            w.write_record([
                "branch".to_owned(),
                fmt_f64(r.p),
                r.j.to_string(),
                fmt_f64(r.theta),
                fmt_f64(r.deriv),
                String::new(),
                String::new(),
                String::new(),
            ])?;
        }
        let get = |k: &str| {
            self.values
                .get(k)
                .and_then(Value::as_f64)
                .map(fmt_f64)
                .unwrap_or_default()
        };
        w.write_record([
            "summary".to_owned(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            get("elliptic_by_rho"),
            get("elliptic_by_branches"),
            get("discrepancy"),
        ])?;
        w.flush()
    }
}
