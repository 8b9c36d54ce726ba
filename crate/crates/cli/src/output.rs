//! Byte-stable emitters: CSV, JSON and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// Lowercase scientific notation with 12 significant digits; −0 prints as 0.
pub fn fmt_num(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.11e}")
}

/// A CSV table of numbers; `None` cells are written empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.rows.len() * self.header.len() * 20);
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.map(fmt_num).unwrap_or_default()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn parse_csv(text: &str) -> CliResult<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| CliError::Validation("empty csv".into()))?
            .split(',')
            .map(str::to_string)
            .collect::<Vec<_>>();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let row = line
                .split(',')
                .map(|c| {
                    if c.is_empty() {
                        Ok(None)
                    } else {
                        c.parse::<f64>()
                            .map(Some)
                            .map_err(|e| CliError::Validation(format!("csv line {}: '{c}': {e}", i + 2)))
                    }
                })
                .collect::<CliResult<Vec<_>>>()?;
            if row.len() != header.len() {
                return Err(CliError::Validation(format!("csv line {}: expected {} fields", i + 2, header.len())));
            }
            rows.push(row);
        }
        Ok(Table { header, rows })
    }
}

/// Tracks the files a command writes so the manifest can list them.
#[derive(Debug)]
pub struct OutputDir {
    pub dir: PathBuf,
    written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(OutputDir {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> CliResult<()> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        self.written.push(path);
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<()> {
        self.write(name, to_json(value).as_bytes())
    }

    /// Writes `manifest.json` last, with digests of everything written before.
    pub fn finish(self, mut manifest: Manifest) -> CliResult<PathBuf> {
        for path in &self.written {
            let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
            manifest.files.push(FileEntry {
                name: path.file_name().unwrap_or_default().to_string_lossy().into_owned(),
                bytes: bytes.len() as u64,
                sha256: hex::encode(Sha256::digest(&bytes)),
            });
        }
        let path = self.dir.join(MANIFEST);
        fs::write(&path, to_json(&manifest)).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }
}

pub const MANIFEST: &str = "manifest.json";

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FileEntry {
    pub name: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub derived: serde_json::Value,
    pub constants_vintage: String,
    pub duration_s: f64,
    pub files: Vec<FileEntry>,
}

/// Recomputes every digest listed in `dir/manifest.json`; returns the
/// names whose contents no longer match.
pub fn verify_manifest(dir: &Path) -> CliResult<Vec<String>> {
    let path = dir.join(MANIFEST);
    let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    let m: Manifest = serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let mut bad = Vec::new();
    for f in &m.files {
        let p = dir.join(&f.name);
        match fs::read(&p) {
            Ok(bytes) if hex::encode(Sha256::digest(&bytes)) == f.sha256 && bytes.len() as u64 == f.bytes => {}
            _ => bad.push(f.name.clone()),
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.0), "0.00000000000e0");
        assert_eq!(fmt_num(-0.0), "0.00000000000e0");
        assert_eq!(fmt_num(1.5e-9), "1.50000000000e-9");
        assert_eq!(fmt_num(-2.0 / 3.0), "-6.66666666667e-1");
    }

    #[test]
    fn csv_round_trip() {
        let mut t = Table::new(["x_m", "v"]);
        t.rows.push(vec![Some(-1e-8), Some(1.0 / 3.0)]);
        t.rows.push(vec![Some(0.0), None]);
        let s = t.to_csv();
        assert_eq!(Table::parse_csv(&s).unwrap().to_csv(), s);
        assert!(s.contains("0.00000000000e0,\n"));
    }
}
