use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Where results go. Nothing is written without a path.
#[derive(Debug, Clone)]
pub struct Output {
    path: Option<PathBuf>,
    format: Format,
}

impl Output {
    /// The format defaults to JSON for `.json` paths and CSV otherwise.
    pub fn new(path: Option<PathBuf>, format: Option<Format>) -> Self {
        let format = format.unwrap_or_else(|| match path.as_deref().and_then(Path::extension) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        });
        Output { path, format }
    }

    pub fn write<J: Serialize>(&self, table: &Table, json: &J) -> Result<(), CliError> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let bytes = match self.format {
            Format::Csv => table.to_csv()?,
            Format::Json => {
                let mut v = serde_json::to_vec_pretty(json)
                    .map_err(|e| CliError::config(format!("cli: cannot encode JSON: {e}")))?;
                v.push(b'\n');
                v
            }
        };
        fs::File::create(path)
            .and_then(|mut f| f.write_all(&bytes))
            .map_err(|e| CliError::config(format!("cli: cannot write {}: {e}", path.display())))?;
        println!("wrote {}", path.display());
        Ok(())
    }
}

/// Rows of already formatted cells under a fixed header.
#[derive(Debug, Clone)]
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let fail = |e: csv::Error| CliError::config(format!("cli: cannot encode CSV: {e}"));
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(fail)?;
        for row in &self.rows {
            w.write_record(row).map_err(fail)?;
        }
        w.into_inner()
            .map_err(|e| CliError::config(format!("cli: cannot encode CSV: {e}")))
    }
}

/// Shortest round-trip text, in exponent form for very small or large
/// magnitudes.
pub fn num(x: f64) -> String {
    let m = x.abs();
    if x != 0.0 && m.is_finite() && !(1e-4..1e15).contains(&m) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}
