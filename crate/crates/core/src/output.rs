//! Deterministic CSV and JSON sidecar emission.
//!
//! CSV: header row, period decimal separator, scientific notation with 17
//! significant digits so values round-trip exactly; identical resolved
//! configuration and crate version produce byte-identical files.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::Result;

/// One CSV cell; integers keep their own formatting.
#[derive(Debug, Clone, Copy)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
        }
    }
}

/// 17 significant digits, scientific notation; round-trip exact for f64.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<Cell>]) -> Result<()> {
    let mut buf = String::new();
    buf.push_str(&header.join(","));
    buf.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(Cell::render).collect();
        buf.push_str(&line.join(","));
        buf.push('\n');
    }
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut f = fs::File::create(path)?;
    f.write_all(buf.as_bytes())?;
    Ok(())
}

/// Sidecar payload: the resolved configuration, per-column units, the
/// command that produced the file, and the crate version.
#[derive(Debug, Serialize)]
pub struct Sidecar<'a> {
    pub command: &'a str,
    pub version: &'a str,
    pub columns: Vec<ColumnMeta<'a>>,
    pub config: &'a RunConfig,
}

#[derive(Debug, Serialize)]
pub struct ColumnMeta<'a> {
    pub name: &'a str,
    pub unit: &'a str,
}

/// Write `<stem>.meta.json` next to a primary CSV.
pub fn write_sidecar(csv_path: &Path, sidecar: &Sidecar) -> Result<()> {
    let mut path = csv_path.to_path_buf();
    path.set_extension("meta.json");
    let text = serde_json::to_string_pretty(sidecar)
        .map_err(|e| crate::error::Error::Numerics(format!("sidecar serialization: {e}")))?;
    fs::write(&path, text)?;
    Ok(())
}

pub fn columns<'a>(pairs: &[(&'a str, &'a str)]) -> Vec<ColumnMeta<'a>> {
    pairs.iter().map(|&(name, unit)| ColumnMeta { name, unit }).collect()
}
