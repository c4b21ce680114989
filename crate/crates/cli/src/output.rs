use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Files written under `--out-dir`, with their digests for the manifest.
pub struct OutputDir {
    root: PathBuf,
    written: BTreeMap<String, String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).with_context(|| format!("cannot create output directory {}", root.display()))?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            written: BTreeMap::new(),
        })
    }

    /// Renders into memory first so a failed render leaves no partial file.
    pub fn write_with<F>(&mut self, name: &str, render: F) -> Result<()>
    where
        F: FnOnce(&mut Vec<u8>) -> blogcascade::Result<()>,
    {
        let mut buf = Vec::new();
        render(&mut buf).with_context(|| format!("cannot render {name}"))?;
        self.write_bytes(name, buf)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut buf = serde_json::to_vec_pretty(value)?;
        buf.push(b'\n');
        self.write_bytes(name, buf)
    }

    fn write_bytes(&mut self, name: &str, buf: Vec<u8>) -> Result<()> {
        let path = self.root.join(name);
        fs::write(&path, &buf).with_context(|| format!("cannot write {}", path.display()))?;
        self.written.insert(name.to_string(), sha256_hex(&buf));
        Ok(())
    }

    /// Writes `manifest.json` last; it lists every other output.
    pub fn finish(mut self, manifest: Manifest) -> Result<()> {
        let manifest = ManifestFile {
            outputs: std::mem::take(&mut self.written),
            out_dir: self.root.display().to_string(),
            manifest,
        };
        self.write_json("manifest.json", &manifest)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputFile {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub inputs: BTreeMap<&'static str, InputFile>,
    pub window: Option<blogcascade::ingest::Window>,
    pub base_seed: Option<u64>,
    pub config: serde_json::Value,
}

#[derive(Serialize)]
struct ManifestFile {
    #[serde(flatten)]
    manifest: Manifest,
    out_dir: String,
    outputs: BTreeMap<String, String>,
}
