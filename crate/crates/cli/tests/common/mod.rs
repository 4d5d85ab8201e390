#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_eprwmr"));
    cmd.env_remove("EPRWMR_OUT");
    cmd
}

pub fn run_in(out: &Path, args: &[&str]) -> Output {
    bin().args(args).arg("--out").arg(out).output().expect("binary runs")
}

pub fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

pub fn load_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Schema errors for `instance` against `schemas/<name>`.
pub fn schema_errors(name: &str, instance: &Value) -> Vec<String> {
    let schema = load_json(&schema_dir().join(name));
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    validator.iter_errors(instance).map(|e| format!("{e} at {}", e.instance_path())).collect()
}

/// Validates every JSON file in `dir` against its schema and round-trips every CSV.
/// Returns the number of files checked.
pub fn check_artifacts(dir: &Path) -> usize {
    let mut checked = 0;
    let mut entries: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    entries.sort();
    for path in entries {
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => {
                let schema = if name == "criterion.json" { "criterion_report.schema.json" } else { "sidecar.schema.json" };
                let errs = schema_errors(schema, &load_json(&path));
                assert!(errs.is_empty(), "{name}: {errs:?}");
                if schema == "sidecar.schema.json" {
                    for f in load_json(&path)["files"].as_array().unwrap() {
                        assert!(dir.join(f.as_str().unwrap()).exists(), "{name} lists missing {f}");
                    }
                }
            }
            Some("csv") => {
                let head = std::fs::read_to_string(&path).unwrap();
                if head.starts_with("t,run,xA") {
                    let rows = eprwmr_core::sim::read_trajectory_csv(std::fs::File::open(&path).unwrap()).unwrap();
                    assert!(!rows.is_empty(), "{name}");
                    let runs = rows.iter().map(|r| r.run).max().unwrap() + 1;
                    assert_eq!(rows.len() % runs, 0, "{name}: ragged trajectory table");
                } else {
                    let table = eprwmr_cli::read_table(&path).unwrap();
                    assert!(!table.rows.is_empty(), "{name}");
                    assert!(table.rows.iter().all(|r| r.len() == table.header.len() && r.iter().all(|v| v.is_finite())), "{name}");
                }
            }
            _ => panic!("unexpected artifact {name}"),
        }
        checked += 1;
    }
    checked
}

/// Map of file name to bytes for every artifact in `dir`.
pub fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().to_string(), std::fs::read(&p).unwrap())
        })
        .collect();
    files.sort();
    files
}
