//! Output directory bookkeeping and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const MANIFEST: &str = "manifest.json";
pub const CONFIG: &str = "config.toml";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub phase: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config_sha256: String,
    pub artifacts: Vec<Artifact>,
    pub timings: Vec<Timing>,
}

impl RunManifest {
    pub fn read(dir: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(dir.join(MANIFEST))
            .map_err(|e| CliError::Precondition(format!("{}: {e}", dir.join(MANIFEST).display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Precondition(format!("bad manifest: {e}")))
    }
}

pub fn sha256_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

/// Files written by one command.
pub struct Run {
    dir: PathBuf,
    command: String,
    files: Vec<String>,
    timings: Vec<Timing>,
    clock: Instant,
}

impl Run {
    pub fn new(dir: &Path, command: &str) -> Result<Self, CliError> {
        fs::create_dir_all(dir)?;
        Ok(Run { dir: dir.to_path_buf(), command: command.into(), files: Vec::new(), timings: Vec::new(), clock: Instant::now() })
    }

    pub fn write(&mut self, name: &str, data: impl AsRef<[u8]>) -> Result<(), CliError> {
        fs::write(self.dir.join(name), data)?;
        if !self.files.iter().any(|f| f == name) {
            self.files.push(name.into());
        }
        Ok(())
    }

    /// Records the time since the previous mark.
    pub fn mark(&mut self, phase: &str) {
        self.timings.push(Timing { phase: phase.into(), seconds: self.clock.elapsed().as_secs_f64() });
        self.clock = Instant::now();
    }

    /// Writes the effective config and the manifest listing every file.
    pub fn finish(mut self, config: &str) -> Result<RunManifest, CliError> {
        self.write(CONFIG, config)?;
        let mut artifacts = Vec::with_capacity(self.files.len());
        for f in &self.files {
            let data = fs::read(self.dir.join(f))?;
            artifacts.push(Artifact { file: f.clone(), sha256: sha256_hex(&data), bytes: data.len() as u64 });
        }
        let m = RunManifest {
            tool: "whitext".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: self.command.clone(),
            config_sha256: sha256_hex(config.as_bytes()),
            artifacts,
            timings: self.timings,
        };
        let text = serde_json::to_string_pretty(&m).map_err(|e| CliError::Internal(e.to_string()))?;
        fs::write(self.dir.join(MANIFEST), text + "\n")?;
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
