//! Atomic file output, CSV tables and run manifests.

use std::io::Write;
use std::path::{Path, PathBuf};

use dpc_core::{Error, Result};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Write via a temporary file in the same directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Pretty JSON with keys sorted at every level.
pub fn sorted_json<T: Serialize>(value: &T) -> Result<String> {
    let v: Value = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

/// RFC-4180 table with a header row.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(std::io::Error::other(e)))
}

/// Hash of a git blob object, computed with SHA-256.
pub fn content_hash(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", bytes.len()).as_bytes());
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Files written by one command, and the manifest describing them.
pub struct ReportBundle {
    pub dir: PathBuf,
    pub files: Vec<(String, String)>,
}

impl ReportBundle {
    pub fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), files: Vec::new() })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.dir.join(name);
        write_atomic(&path, contents.as_bytes())?;
        self.files.push((name.to_string(), content_hash(contents.as_bytes())));
        Ok(path)
    }

    /// `manifest.json` with the command, resolved config, seeds and output hashes.
    pub fn finish<C: Serialize>(mut self, command: &str, config: &C, seeds: &[u64], extra: Value) -> Result<Vec<PathBuf>> {
        let outputs: serde_json::Map<String, Value> =
            self.files.iter().map(|(n, h)| (n.clone(), json!({ "content_hash": h }))).collect();
        let manifest = json!({
            "command": command,
            "config": serde_json::to_value(config)?,
            "seeds": seeds,
            "outputs": outputs,
            "summary": extra,
        });
        let text = sorted_json(&manifest)?;
        let mut paths: Vec<PathBuf> = self.files.iter().map(|(n, _)| self.dir.join(n)).collect();
        paths.push(self.write("manifest.json", &text)?);
        self.files.pop();
        Ok(paths)
    }
}
