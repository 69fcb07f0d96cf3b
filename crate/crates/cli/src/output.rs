//! CSV tables with a commented configuration header, and the JSON run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

/// One CSV cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Empty,
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Build a row from heterogeneous values.
#[macro_export]
macro_rules! row {
    ($($v:expr),* $(,)?) => { vec![$($crate::output::Cell::from($v)),*] };
}

/// Output directory of one run.
pub struct Output {
    dir: PathBuf,
    header: String,
    files: Vec<String>,
}

impl Output {
    /// `header` lines are written as `#` comments above every table.
    pub fn new(dir: &Path, header: String) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        Ok(Output {
            dir: dir.to_path_buf(),
            header,
            files: Vec::new(),
        })
    }

    pub fn files(&self) -> &[String] {
        &self.files
    }

    /// Write `name.csv`; `columns` pairs each column name with its description.
    pub fn table(&mut self, name: &str, columns: &[(&str, &str)], rows: &[Vec<Cell>]) -> Result<(), CliError> {
        let file = format!("{name}.csv");
        let mut text = String::new();
        for line in self.header.lines() {
            text.push_str(format!("# {line}").trim_end());
            text.push('\n');
        }
        for (c, d) in columns {
            text.push_str(&format!("# column {c}: {d}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(format!("{file}: {e}"));
        w.write_record(columns.iter().map(|c| c.0)).map_err(io)?;
        for (k, r) in rows.iter().enumerate() {
            if r.len() != columns.len() {
                return Err(CliError::Io(format!(
                    "{file}: row {k} has {} cells, expected {}",
                    r.len(),
                    columns.len()
                )));
            }
            let mut cells = Vec::with_capacity(r.len());
            for (cell, col) in r.iter().zip(columns) {
                cells.push(match cell {
                    Cell::Int(v) => v.to_string(),
                    Cell::Num(v) if v.is_finite() => v.to_string(),
                    Cell::Num(v) => {
                        return Err(CliError::Core(floqcool::Error::Argument(format!(
                            "{file}: non-finite value {v} in column {} of row {k}",
                            col.0
                        ))))
                    }
                    Cell::Text(s) => s.clone(),
                    Cell::Empty => String::new(),
                });
            }
            w.write_record(&cells).map_err(io)?;
        }
        let body = w.into_inner().map_err(|e| CliError::Io(format!("{file}: {e}")))?;
        text.push_str(&String::from_utf8(body).map_err(|e| CliError::Io(e.to_string()))?);
        let path = self.dir.join(&file);
        fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.files.push(file);
        Ok(())
    }

    /// Write `manifest.json`.
    pub fn manifest<T: Serialize>(&self, manifest: &T) -> Result<(), CliError> {
        let path = self.dir.join("manifest.json");
        let text = serde_json::to_string_pretty(manifest).map_err(|e| CliError::Io(e.to_string()))?;
        fs::write(&path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}
