use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

use super::config::ExperimentConfig;
use super::run::ExperimentRecord;
use super::table::emit_csv;

pub const CONFIG_LOG: &str = "runs.jsonl";

#[derive(Serialize)]
struct LogEntry<'a> {
    run: usize,
    table: &'a str,
    records: usize,
    breakdowns: usize,
    config: &'a ExperimentConfig,
}

/// Appends one invocation to `dir`: `run-NNNN.csv` with the records and a
/// line in `runs.jsonl` echoing the configuration. Returns the CSV path.
pub fn append_run(dir: &Path, config: &ExperimentConfig, records: &[ExperimentRecord]) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let mut run = 1;
    let path = loop {
        let p = dir.join(format!("run-{run:04}.csv"));
        if !p.exists() {
            break p;
        }
        run += 1;
    };
    fs::write(&path, emit_csv(records))?;
    let name = path.file_name().and_then(|s| s.to_str()).unwrap_or_default();
    let entry = LogEntry {
        run,
        table: name,
        records: records.len(),
        breakdowns: records.iter().filter(|r| !r.status.is_ok()).count(),
        config,
    };
    let line = serde_json::to_string(&entry).map_err(|e| Error::Io(e.to_string()))?;
    let mut log = OpenOptions::new().create(true).append(true).open(dir.join(CONFIG_LOG))?;
    writeln!(log, "{line}")?;
    Ok(path)
}
