//! The plain-text run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::emit::EmittedFile;
use crate::error::CliError;

pub const MANIFEST_NAME: &str = "manifest.txt";

/// What a run did: the resolved configuration, every emitted file with
/// its checksum, the audit values and any failed hard checks.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunManifest {
    pub scenario: String,
    pub version: String,
    pub config: BTreeMap<String, String>,
    pub reconstructed: Vec<String>,
    pub files: Vec<EmittedFile>,
    pub audit: Vec<(String, String)>,
    pub failed: Vec<String>,
}

impl RunManifest {
    pub fn passed(&self) -> bool {
        self.failed.is_empty()
    }

    /// Audit value recorded under `key`.
    pub fn audit_value(&self, key: &str) -> Option<&str> {
        self.audit.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// The manifest text; file paths are written relative to `base`.
    pub fn render(&self, base: &Path) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: &str| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        };
        kv("software.name", "slitwave");
        kv("software.version", &self.version);
        kv("scenario.name", &self.scenario);
        kv("status", if self.passed() { "ok" } else { "failed" });
        let failed = if self.failed.is_empty() { "none".to_string() } else { self.failed.join(", ") };
        kv("checks.failed", &failed);
        for key in &self.reconstructed {
            kv(&format!("reconstruction.{key}"), "reconstructed value");
        }
        for (k, v) in &self.config {
            kv(&format!("config.{k}"), v);
        }
        for f in &self.files {
            let name = f.path.strip_prefix(base).unwrap_or(&f.path).display().to_string();
            kv(&format!("file.{name}.rows"), &f.rows.to_string());
            kv(&format!("file.{name}.sha256"), &f.sha256);
        }
        for (k, v) in &self.audit {
            kv(&format!("audit.{k}"), v);
        }
        out
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, CliError> {
        let path = dir.join(MANIFEST_NAME);
        fs::write(&path, self.render(dir)).map_err(|e| CliError::io(format!("cannot write {}", path.display()), e))?;
        Ok(path)
    }
}

/// Parses a manifest back into its key-value pairs, in file order.
pub fn read_manifest(text: &str) -> Vec<(String, String)> {
    text.lines().filter_map(|l| l.split_once(" = ")).map(|(k, v)| (k.to_string(), v.to_string())).collect()
}
