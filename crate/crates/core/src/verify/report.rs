use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{io_err, Result};

/// One row of a verdict report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub measured: f64,
    pub threshold: String,
    pub passed: bool,
}

impl Verdict {
    pub fn new(name: impl Into<String>, measured: f64, threshold: impl Into<String>, passed: bool) -> Self {
        Self {
            name: name.into(),
            measured,
            threshold: threshold.into(),
            passed,
        }
    }
}

pub fn write_report_csv(path: &Path, rows: &[Verdict]) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(())
}

/// Fixed-width table, one row per check.
pub fn summary_table(rows: &[Verdict]) -> String {
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(4).max(5);
    let mut out = String::new();
    let _ = writeln!(out, "{:<width$}  {:>14}  {:<24}  result", "check", "measured", "threshold");
    for r in rows {
        let _ = writeln!(
            out,
            "{:<width$}  {:>14.6e}  {:<24}  {}",
            r.name,
            r.measured,
            r.threshold,
            if r.passed { "PASS" } else { "FAIL" }
        );
    }
    out
}
