use std::fmt::Write as _;
use std::path::Path;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Records,
    Both,
}

impl Format {
    pub fn parse(s: Option<&str>) -> Result<Self, CliError> {
        match s {
            None => Ok(Format::Both),
            Some("csv") => Ok(Format::Csv),
            Some("records") => Ok(Format::Records),
            Some(other) => Err(CliError::Config(format!(
                "unknown format {other:?}; expected csv or records"
            ))),
        }
    }
}

/// A table of string cells. Every value is already an exact rendering, so
/// writing it out involves no formatting decisions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// One JSON object per row, keys in column order.
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push('{');
            for (i, (k, v)) in self.columns.iter().zip(row).enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(
                    out,
                    "{}:{}",
                    serde_json::Value::from(*k),
                    serde_json::Value::from(v.as_str())
                );
            }
            out.push_str("}\n");
        }
        out
    }

    pub fn write(&self, dir: &Path, format: Format) -> Result<(), CliError> {
        std::fs::create_dir_all(dir)?;
        if format != Format::Records {
            std::fs::write(dir.join("report.csv"), self.to_csv()?)?;
        }
        if format != Format::Csv {
            std::fs::write(dir.join("report.ndjson"), self.to_records())?;
        }
        Ok(())
    }

    /// Aligned plain-text table for the terminal.
    pub fn to_table(&self) -> String {
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        let line = |cells: Vec<&str>, out: &mut String| {
            let parts: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            out.push_str(parts.join("  ").trim_end());
            out.push('\n');
        };
        line(self.columns.clone(), &mut out);
        for row in &self.rows {
            line(row.iter().map(String::as_str).collect(), &mut out);
        }
        out
    }
}
