//! Run reports: per-criterion verdicts, tabular results and figure data.

use serde::Serialize;
use std::io;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Threshold {
    AtMost(f64),
    AtLeast(f64),
    Within([f64; 2]),
}

impl Threshold {
    pub fn check(&self, v: f64) -> bool {
        match *self {
            Threshold::AtMost(t) => v <= t,
            Threshold::AtLeast(t) => v >= t,
            Threshold::Within([lo, hi]) => v >= lo && v <= hi,
        }
    }
}

impl std::fmt::Display for Threshold {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Threshold::AtMost(t) => write!(f, "<= {t:e}"),
            Threshold::AtLeast(t) => write!(f, ">= {t}"),
            Threshold::Within([lo, hi]) => write!(f, "in [{lo}, {hi}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub criterion_id: String,
    pub measured: f64,
    pub threshold: Threshold,
    pub pass: bool,
}

impl CriterionResult {
    pub fn new(id: impl Into<String>, measured: f64, threshold: Threshold) -> Self {
        CriterionResult { criterion_id: id.into(), measured, pass: threshold.check(measured), threshold }
    }
}

/// One line of results.csv.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub cell: String,
    pub quantity: String,
    pub value: f64,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub experiment: String,
    pub criteria: Vec<CriterionResult>,
    pub rows: Vec<Row>,
    /// Tables always written next to results.csv: (file name, header, records).
    pub tables: Vec<(String, Vec<String>, Vec<Vec<String>>)>,
    /// Figure data, written with --emit-figures.
    pub figures: Vec<(String, Vec<String>, Vec<Vec<String>>)>,
    /// Extra line-oriented JSON records, e.g. stability verdicts.
    pub records: Vec<serde_json::Value>,
    /// Sweep cells that failed; the rest of the report is kept.
    pub failures: Vec<String>,
}

impl RunReport {
    pub fn row(&mut self, cell: impl Into<String>, quantity: &str, value: f64, tolerance: Option<f64>) {
        self.rows.push(Row { cell: cell.into(), quantity: quantity.into(), value, tolerance });
    }

    pub fn pass(&self) -> bool {
        !self.criteria.is_empty() && self.criteria.iter().all(|c| c.pass) && self.failures.is_empty()
    }

    /// results.csv, report.json, optional records.jsonl and figure CSVs.
    pub fn write(&self, dir: &Path, figures: bool) -> io::Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut rows = self.rows.clone();
        rows.sort_by(|a, b| a.cell.cmp(&b.cell).then(a.quantity.cmp(&b.quantity)));
        let mut w = csv::Writer::from_path(dir.join("results.csv"))?;
        w.write_record(["experiment", "cell", "quantity", "value", "tolerance"])?;
        for r in &rows {
            let tol = r.tolerance.map(|t| format!("{t:e}")).unwrap_or_default();
            w.write_record([self.experiment.as_str(), &r.cell, &r.quantity, &format!("{:e}", r.value), &tol])?;
        }
        w.flush()?;
        let json = serde_json::to_string_pretty(&self.criteria).map_err(io::Error::other)?;
        std::fs::write(dir.join("report.json"), json + "\n")?;
        if !self.records.is_empty() {
            let mut s = String::new();
            for r in &self.records {
                s.push_str(&r.to_string());
                s.push('\n');
            }
            std::fs::write(dir.join("records.jsonl"), s)?;
        }
        let extra = if figures { &self.figures[..] } else { &[] };
        for (name, header, recs) in self.tables.iter().chain(extra) {
            let mut w = csv::Writer::from_path(dir.join(name))?;
            w.write_record(header)?;
            for r in recs {
                w.write_record(r)?;
            }
            w.flush()?;
        }
        Ok(())
    }
}
