//! Artifact writers. Every file is rendered in memory first, so the
//! checksum in the manifest is the checksum of the exact bytes on disk.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::Format;
use crate::error::{CliError, CliResult};

/// Numeric table with a fixed column order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> CliResult<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let fail = |e: csv::Error| CliError::Output(format!("csv: {e}"));
        w.write_record(&self.columns).map_err(fail)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&v| format_float(v))).map_err(fail)?;
        }
        w.into_inner().map_err(|e| CliError::Output(format!("csv: {e}")))
    }

    /// Array of objects, keys in column order.
    pub fn to_json_value(&self) -> serde_json::Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }

    pub fn render(&self, format: Format) -> CliResult<Vec<u8>> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => to_json_bytes(&self.to_json_value()),
        }
    }
}

/// Shortest text that parses back to the same bits; exponent form for very
/// small or large magnitudes so drift columns stay readable.
pub fn format_float(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

pub fn to_json_bytes<T: Serialize + ?Sized>(value: &T) -> CliResult<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Output(format!("json: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// A written file as recorded in the manifest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WrittenFile {
    pub path: PathBuf,
    pub sha256: String,
    pub bytes: usize,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> CliResult<WrittenFile> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))?;
    log::info!("wrote {} ({} bytes)", path.display(), bytes.len());
    Ok(WrittenFile {
        path: path.to_path_buf(),
        sha256: sha256_hex(bytes),
        bytes: bytes.len(),
    })
}

/// `profile.csv` → `profile.csv.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_else(|| "zbw".into());
    name.push(".manifest.json");
    out.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::new(&["ell", "R"]);
        assert_eq!(t.to_csv().unwrap(), b"ell,R\n");
        assert_eq!(to_json_bytes(&t.to_json_value()).unwrap(), b"[]\n");
    }

    #[test]
    fn csv_round_trips_bits() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![0.1 + 0.2, -1.0e-300]);
        t.push(vec![2.573659854645199e-13, 6.02e23]);
        t.push(vec![1.0 / 3.0, 12345.678]);
        let text = String::from_utf8(t.to_csv().unwrap()).unwrap();
        assert!(text.ends_with('\n') && !text.contains('\r'));
        let back: Vec<f64> = text
            .lines()
            .skip(1)
            .flat_map(|l| l.split(',').map(|s| s.parse::<f64>().unwrap()).collect::<Vec<_>>())
            .collect();
        let flat: Vec<f64> = t.rows.concat();
        assert_eq!(back, flat);
        assert!(text.contains("2.573659854645199e-13"));
    }

    #[test]
    fn manifest_sits_next_to_output() {
        assert_eq!(manifest_path(Path::new("out/traj.csv")), PathBuf::from("out/traj.csv.manifest.json"));
        assert_eq!(sha256_hex(b"").len(), 64);
    }
}
