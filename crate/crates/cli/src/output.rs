//! File emission: CSV with provenance comments, pretty JSON reports.
//!
//! Every file embeds the full effective config and master seed, CSV uses
//! `.` decimals, LF endings, UTF-8, and a mandatory header row. Floats are
//! written with 17 significant digits so reruns are byte-identical.

use std::fs;
use std::path::{Path, PathBuf};

use crate::config::RunConfig;
use crate::CliError;

/// 17 significant digits: enough to reproduce any f64 exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn provenance(config: &RunConfig) -> String {
    let json = serde_json::to_string(config).expect("config serializes");
    format!("# config = {json}\n# master_seed = {}\n", config.master_seed)
}

pub struct CsvFile {
    buffer: String,
}

impl CsvFile {
    pub fn new(config: &RunConfig, header: &str) -> Self {
        let mut buffer = provenance(config);
        buffer.push_str(header);
        buffer.push('\n');
        CsvFile { buffer }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.buffer.push_str(&fields.join(","));
        self.buffer.push('\n');
    }

    pub fn write(self, dir: &Path, name: &str) -> Result<PathBuf, CliError> {
        write_file(dir, name, self.buffer.as_bytes())
    }
}

pub fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

pub fn write_json<T: serde::Serialize>(
    dir: &Path,
    name: &str,
    value: &T,
) -> Result<PathBuf, CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("serializing {name}: {e}")))?;
    text.push('\n');
    write_file(dir, name, text.as_bytes())
}
