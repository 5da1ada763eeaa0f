//! Output files: CSV tables (UTF-8, header row, '.' decimals, LF endings),
//! JSON tables, and the run manifest.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

use crate::config::{OutFormat, RunConfig};

/// A table is a header plus stringly rows; numeric cells use Rust's shortest
/// round-trip float formatting so re-runs are byte-identical.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> String {
        let v = serde_json::json!({
            "columns": self.header,
            "rows": self.rows,
        });
        serde_json::to_string_pretty(&v).expect("table serializes")
    }
}

pub fn cell(v: f64) -> String {
    format!("{v}")
}

pub fn write_table(
    dir: &Path,
    stem: &str,
    table: &Table,
    format: OutFormat,
) -> anyhow::Result<PathBuf> {
    let path = match format {
        OutFormat::Csv => dir.join(format!("{stem}.csv")),
        OutFormat::Json => dir.join(format!("{stem}.json")),
    };
    let body = match format {
        OutFormat::Csv => table.to_csv(),
        OutFormat::Json => table.to_json(),
    };
    write_text(&path, &body)?;
    Ok(path)
}

pub fn write_text(path: &Path, body: &str) -> anyhow::Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)
            .with_context(|| format!("creating {}", parent.display()))?;
    }
    std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}

/// Run manifest: the full config (re-runnable via --config), the files the
/// run produced, and summary statistics.
#[derive(Serialize)]
struct Manifest<'a> {
    config: &'a RunConfig,
    outputs: Vec<String>,
    statistics: serde_json::Value,
}

pub fn write_manifest(
    dir: &Path,
    run: &RunConfig,
    outputs: &[PathBuf],
    statistics: serde_json::Value,
) -> anyhow::Result<PathBuf> {
    let manifest = Manifest {
        config: run,
        outputs: outputs
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect(),
        statistics,
    };
    let path = dir.join(format!("{}_manifest.json", run.command.name()));
    let mut body = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    body.push('\n');
    write_text(&path, &body)?;
    Ok(path)
}
