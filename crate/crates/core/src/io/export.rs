use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{FifError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub file: String,
    pub rows: usize,
    pub sha256: String,
}

pub(crate) fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> FifError + '_ {
    move |source| FifError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Render a CSV table in memory. Floats use Rust's shortest round-trip form.
pub fn render_csv(header: &[String], rows: &[Vec<f64>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| FifError::SchemaViolation(format!("csv: {e}"));
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.iter().map(|v| v.to_string()))
            .map_err(csv_err)?;
    }
    w.into_inner()
        .map_err(|e| FifError::SchemaViolation(format!("csv: {e}")))
}

pub(crate) fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

pub(crate) fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(io_err(path))
}

pub(crate) fn write_table(
    dir: &Path,
    file: &str,
    header: &[String],
    rows: &[Vec<f64>],
) -> Result<TableEntry> {
    let bytes = render_csv(header, rows)?;
    let path: PathBuf = dir.join(file);
    write_bytes(&path, &bytes)?;
    Ok(TableEntry {
        file: file.to_string(),
        rows: rows.len(),
        sha256: sha256_hex(&bytes),
    })
}
