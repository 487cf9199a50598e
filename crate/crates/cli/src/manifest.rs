//! Run manifests: every command that writes artifacts records exactly how
//! they were produced. Reruns with the same configuration section produce
//! bit-identical tensor outputs.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub threads: usize,
    /// All resolved configuration values, including applied defaults.
    pub config: serde_json::Value,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub wall_seconds: f64,
}

pub struct ManifestBuilder {
    command: String,
    threads: usize,
    config: serde_json::Value,
    inputs: Vec<String>,
    outputs: Vec<String>,
    started: Instant,
}

impl ManifestBuilder {
    pub fn new(command: &str, threads: usize, config: serde_json::Value) -> Self {
        ManifestBuilder {
            command: command.to_string(),
            threads,
            config,
            inputs: Vec::new(),
            outputs: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn input(&mut self, path: &Path) {
        self.inputs.push(path.display().to_string());
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    /// Writes `manifest.json` into the output directory.
    pub fn write(self, dir: &Path) -> CliResult<()> {
        let manifest = RunManifest {
            command: self.command,
            version: env!("CARGO_PKG_VERSION").to_string(),
            threads: self.threads,
            config: self.config,
            inputs: self.inputs,
            outputs: self.outputs,
            wall_seconds: self.started.elapsed().as_secs_f64(),
        };
        let path = dir.join("manifest.json");
        let body = serde_json::to_string_pretty(&manifest)
            .map_err(|e| CliError::Io(format!("manifest serialization: {e}")))?;
        std::fs::write(&path, body).map_err(|e| CliError::io_at(&path, e))
    }
}
