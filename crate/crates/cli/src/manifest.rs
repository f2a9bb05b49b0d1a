use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub params: Value,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
    pub outputs: Vec<PathBuf>,
}

pub fn now_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0)
}

/// `<primary>.manifest.json`, beside the primary output.
pub fn manifest_path(primary: &Path) -> PathBuf {
    let mut name = primary.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    primary.with_file_name(name)
}

pub struct Run {
    subcommand: &'static str,
    params: Value,
    seed: Option<u64>,
    started: u128,
}

impl Run {
    pub fn start<P: Serialize>(subcommand: &'static str, params: &P, seed: Option<u64>) -> Self {
        Self {
            subcommand,
            params: serde_json::to_value(params).unwrap_or(Value::Null),
            seed,
            started: now_ms(),
        }
    }

    /// Writes the manifest beside the first output and returns its path.
    pub fn finish(self, outputs: &[&Path]) -> Result<Option<PathBuf>> {
        let Some(primary) = outputs.first() else {
            return Ok(None);
        };
        let m = RunManifest {
            subcommand: self.subcommand.to_string(),
            params: self.params,
            seed: self.seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix_ms: self.started,
            finished_unix_ms: now_ms(),
            outputs: outputs.iter().map(|p| p.to_path_buf()).collect(),
        };
        let path = manifest_path(primary);
        let text = serde_json::to_string_pretty(&m)?;
        std::fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
        Ok(Some(path))
    }
}
