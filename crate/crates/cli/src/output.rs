//! Reports and their JSON, CSV and plain-table renderings.

use crate::job::{JobSpec, OutputFormat};
use anyhow::Result;
use serde::Serialize;
use std::io::Write;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Number(f64),
    Integer(i64),
    Flag(bool),
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Number(x)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Integer(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Integer(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Flag(x)
    }
}

/// Shortest round-trip text of `x`, in exponent form outside
/// `[1e-3, 1e15)`.
pub fn shortest(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-3..1e15).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

/// `x` rounded to 12 significant digits, printed without trailing zeros.
pub fn twelve_digits(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    shortest(format!("{x:.11e}").parse().unwrap_or(x))
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Number(x) => twelve_digits(*x),
            Cell::Integer(n) => n.to_string(),
            Cell::Flag(b) => b.to_string(),
        }
    }

    fn plain(&self) -> String {
        match self {
            Cell::Number(x) => shortest(*x),
            Cell::Flag(true) => "PASS".into(),
            Cell::Flag(false) => "FAIL".into(),
            other => other.csv(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(&self.columns)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(Cell::csv))?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn write_plain<W: Write>(&self, mut out: W) -> Result<()> {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::plain).collect()).collect();
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let line = |items: &[String]| -> String {
            items
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        writeln!(out, "{}", line(&self.columns))?;
        writeln!(out, "{}", line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>()))?;
        for row in &cells {
            writeln!(out, "{}", line(row))?;
        }
        Ok(())
    }
}

/// The outcome of a job: the job itself, a structured result, a table view
/// and, for commands that compare routes, whether they agree.
#[derive(Debug, Clone)]
pub struct Report {
    pub job: JobSpec,
    pub result: serde_json::Value,
    pub table: Table,
    pub summary: Vec<(String, String)>,
    pub agreement: Option<bool>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    job: &'a JobSpec,
    result: &'a serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    agreement: Option<bool>,
}

impl Report {
    pub fn new<T: Serialize>(job: &JobSpec, result: &T, table: Table) -> Result<Self> {
        Ok(Report {
            job: job.clone(),
            result: serde_json::to_value(result)?,
            table,
            summary: Vec::new(),
            agreement: None,
        })
    }

    pub fn with_summary(mut self, key: &str, value: impl Into<Cell>) -> Self {
        self.summary.push((key.to_string(), value.into().plain()));
        self
    }

    pub fn with_agreement(mut self, agreement: bool) -> Self {
        self.agreement = Some(agreement);
        self
    }

    pub fn to_json(&self) -> Result<String> {
        let body = JsonReport {
            job: &self.job,
            result: &self.result,
            agreement: self.agreement,
        };
        Ok(serde_json::to_string_pretty(&body)?)
    }

    pub fn write<W: Write>(&self, format: OutputFormat, mut out: W) -> Result<()> {
        match format {
            OutputFormat::Json => writeln!(out, "{}", self.to_json()?)?,
            OutputFormat::Csv => self.table.write_csv(out)?,
            OutputFormat::Table => {
                for (k, v) in &self.summary {
                    writeln!(out, "{k}: {v}")?;
                }
                if !self.summary.is_empty() && !self.table.rows.is_empty() {
                    writeln!(out)?;
                }
                if !self.table.rows.is_empty() {
                    self.table.write_plain(&mut out)?;
                }
                if let Some(a) = self.agreement {
                    writeln!(out, "agreement: {}", if a { "PASS" } else { "FAIL" })?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(twelve_digits(2.0 / std::f64::consts::PI), "0.636619772368");
        assert_eq!(twelve_digits(-0.5), "-0.5");
        assert_eq!(twelve_digits(1.0e-20 / 3.0), "3.33333333333e-21");
        assert_eq!(twelve_digits(0.0), "0");
    }

    #[test]
    fn plain_table_aligns() {
        let mut t = Table::new(&["route", "value"]);
        t.push(vec!["pv_integral".into(), (-0.5).into()]);
        t.push(vec!["x".into(), true.into()]);
        let mut out = Vec::new();
        t.write_plain(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "route        value\n-----------  -----\npv_integral  -0.5\nx            PASS\n");
    }
}
