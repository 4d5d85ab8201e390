use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use eprwmr_core::sim::write_trajectory_csv;
use eprwmr_core::TrajectoryEnsemble;

use crate::config::ExperimentConfig;
use crate::CliError;

/// A file written by a run, with its one-line summary.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub path: PathBuf,
    pub summary: String,
}

/// Numeric table with a header row.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("cannot write {}: {e}", path.display()))
}

/// Writes `table` with floats to 9 significant digits.
pub fn write_table(path: &Path, table: &Table) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(&table.header).map_err(|e| io_err(path, e))?;
    for row in &table.rows {
        w.write_record(row.iter().map(|v| format!("{v:.8e}"))).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

pub fn read_table(path: &Path) -> Result<Table, CliError> {
    let bad = |e: &dyn std::fmt::Display| CliError::Usage(format!("cannot read table {}: {e}", path.display()));
    let mut r = csv::Reader::from_path(path).map_err(|e| bad(&e))?;
    let header = r.headers().map_err(|e| bad(&e))?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| bad(&e))?;
        rows.push(rec.iter().map(|s| s.parse::<f64>()).collect::<Result<Vec<_>, _>>().map_err(|e| bad(&e))?);
    }
    Ok(Table { header, rows })
}

pub fn write_trajectories(path: &Path, e: &TrajectoryEnsemble) -> Result<(), CliError> {
    let mut w = create(path)?;
    write_trajectory_csv(e, &mut w)?;
    w.flush().map_err(|e| io_err(path, e))
}

pub fn write_json(path: &Path, value: &Value) -> Result<(), CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| io_err(path, e))?;
    writeln!(w).map_err(|e| io_err(path, e))?;
    w.flush().map_err(|e| io_err(path, e))
}

/// Sidecar JSON: what was run, which files it describes, and analytic reference values.
pub fn sidecar(kind: &str, cfg: &ExperimentConfig, files: &[&str], parameters: Value, reference: Value) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), json!(kind));
    if let Some(f) = cfg.figure {
        m.insert("figure".into(), json!(f.id()));
    }
    m.insert("files".into(), json!(files));
    m.insert("parameters".into(), parameters);
    m.insert("reference".into(), reference);
    if cfg.print_config {
        m.insert("config".into(), serde_json::to_value(cfg).expect("config serializes"));
    }
    Value::Object(m)
}

/// Collects artifacts under one output directory.
pub struct Sink<'a> {
    dir: &'a Path,
    pub written: Vec<Artifact>,
}

impl<'a> Sink<'a> {
    pub fn new(dir: &'a Path) -> Self {
        Self { dir, written: Vec::new() }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn record(&mut self, path: PathBuf, summary: String) {
        self.written.push(Artifact { path, summary });
    }

    pub fn table(&mut self, name: &str, table: &Table, summary: impl Into<String>) -> Result<(), CliError> {
        let path = self.path(name);
        write_table(&path, table)?;
        self.record(path, summary.into());
        Ok(())
    }

    pub fn trajectories(&mut self, name: &str, e: &TrajectoryEnsemble, summary: impl Into<String>) -> Result<(), CliError> {
        let path = self.path(name);
        write_trajectories(&path, e)?;
        self.record(path, summary.into());
        Ok(())
    }

    pub fn json(&mut self, name: &str, value: &Value, summary: impl Into<String>) -> Result<(), CliError> {
        let path = self.path(name);
        write_json(&path, value)?;
        self.record(path, summary.into());
        Ok(())
    }
}

/// Evenly spaced points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}
