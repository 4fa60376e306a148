//! Run manifests: one JSON file beside each output.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    /// SHA-256 of the canonical parameter JSON and of every input file.
    pub input_hashes: serde_json::Map<String, serde_json::Value>,
    pub tool_version: &'static str,
    pub wall_seconds: f64,
    pub outputs: Vec<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Collects inputs and outputs of one command.
pub struct Recorder {
    command: &'static str,
    parameters: serde_json::Value,
    hashes: serde_json::Map<String, serde_json::Value>,
    outputs: Vec<PathBuf>,
    start: Instant,
}

impl Recorder {
    /// `config` is the text of the config file, if one was read.
    pub fn new(config: Option<&str>, command: &'static str, parameters: impl Serialize) -> Result<Self> {
        let parameters = serde_json::to_value(parameters)?;
        let mut hashes = serde_json::Map::new();
        hashes.insert("parameters".into(), sha256_hex(parameters.to_string().as_bytes()).into());
        if let Some(text) = config {
            hashes.insert("config".into(), sha256_hex(text.as_bytes()).into());
        }
        Ok(Self { command, parameters, hashes, outputs: Vec::new(), start: Instant::now() })
    }

    pub fn input(&mut self, name: &str, bytes: &[u8]) {
        self.hashes.insert(name.into(), sha256_hex(bytes).into());
    }

    /// Writes `bytes` to `path`, creating parent directories.
    pub fn output(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.outputs.push(path.to_path_buf());
        Ok(())
    }

    /// Writes `<output>.manifest.json` for every output recorded.
    pub fn finish(self) -> Result<()> {
        let manifest = RunManifest {
            command: self.command.into(),
            parameters: self.parameters,
            input_hashes: self.hashes,
            tool_version: env!("CARGO_PKG_VERSION"),
            wall_seconds: self.start.elapsed().as_secs_f64(),
            outputs: self.outputs.iter().map(|p| p.display().to_string()).collect(),
        };
        let text = serde_json::to_string_pretty(&manifest)? + "\n";
        for out in &self.outputs {
            let mut name = out.as_os_str().to_owned();
            name.push(".manifest.json");
            std::fs::write(&name, &text).with_context(|| format!("writing {}", Path::new(&name).display()))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn sha256_of_empty_input() {
        assert_eq!(
            super::sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
