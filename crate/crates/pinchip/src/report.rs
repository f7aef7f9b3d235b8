//! Run manifests and atomic artifact writes.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutputRecord {
    pub kind: String,
    /// `None` when the artifact went to stdout.
    pub path: Option<String>,
    pub sha256: String,
}

/// Manifest of one invocation. Holds no timestamps so that identical inputs
/// give identical bytes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// Hash over the config bytes followed by the materials catalog bytes.
    pub config_sha256: String,
    pub outputs: Vec<OutputRecord>,
    pub warnings: Vec<String>,
}

impl RunReport {
    pub fn new(command: &str, config_text: &str, catalog_text: &str) -> Self {
        let mut h = Sha256::new();
        h.update(config_text.as_bytes());
        h.update([0u8]);
        h.update(catalog_text.as_bytes());
        Self {
            tool: "pinchip",
            version: TOOL_VERSION,
            command: command.to_string(),
            config_sha256: hex(&h.finalize()),
            outputs: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn record(&mut self, kind: &str, path: Option<&Path>, bytes: &[u8]) {
        self.outputs.push(OutputRecord {
            kind: kind.to_string(),
            path: path.map(|p| p.display().to_string()),
            sha256: sha256_hex(bytes),
        });
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map(|s| s + "\n")
            .map_err(|e| CliError::analysis("report", e))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex(&Sha256::digest(bytes))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes `bytes` to a temporary file beside `path`, then renames it into
/// place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn config_hash_depends_on_catalog() {
        let a = RunReport::new("scale", "x", "cat-a");
        let b = RunReport::new("scale", "x", "cat-b");
        assert_ne!(a.config_sha256, b.config_sha256);
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
