//! Report text and CSV tables. Numbers are written with 17 significant
//! digits so every value parses back to the same `f64`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::RunError;

pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

pub fn emit_csv(table: &Table, path: &Path) -> Result<(), RunError> {
    if table.rows.is_empty() {
        return Err(RunError::Invalid("refusing to write an empty series".into()));
    }
    fs::write(path, table.to_csv())?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A residual exceeded its tolerance.
    Failed,
}

/// Human-readable run summary: ordered `key = value` lines plus an optional
/// CSV series.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub entries: Vec<(String, String)>,
    pub table: Option<Table>,
    pub status: Status,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            entries: Vec::new(),
            table: None,
            status: Status::Ok,
        }
    }

    pub fn text(&mut self, key: &str, value: impl Into<String>) {
        self.entries.push((key.to_string(), value.into()));
    }

    pub fn num(&mut self, key: &str, value: f64) {
        self.text(key, fmt_num(value));
    }

    /// Records a residual and marks the run failed when it exceeds `tol`.
    pub fn check(&mut self, key: &str, residual: f64, tol: f64) {
        self.num(key, residual);
        if !(residual.abs() <= tol) {
            self.status = Status::Failed;
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command = {}", self.command);
        for (k, v) in &self.entries {
            let _ = writeln!(s, "{k} = {v}");
        }
        let status = match self.status {
            Status::Ok => "ok",
            Status::Failed => "FAILED",
        };
        let _ = writeln!(s, "status = {status}");
        s
    }
}
