//! Per-invocation bookkeeping: input digests, output writing and the run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::Failure;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    /// SHA-256 of every input file, keyed by path as given.
    pub inputs: BTreeMap<String, String>,
    pub outputs: Vec<String>,
    pub seed: u64,
    pub version: String,
    pub duration_secs: f64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub struct Run {
    command: String,
    config: serde_json::Value,
    seed: u64,
    started: Instant,
    inputs: BTreeMap<String, String>,
    outputs: Vec<PathBuf>,
    manifest_path: Option<PathBuf>,
}

impl Run {
    pub fn new(command: String, config: serde_json::Value, seed: u64, manifest_path: Option<PathBuf>) -> Self {
        Run {
            command,
            config,
            seed,
            started: Instant::now(),
            inputs: BTreeMap::new(),
            outputs: Vec::new(),
            manifest_path,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Records the digest of a file read by a library loader.
    pub fn note_input(&mut self, path: &Path) -> Result<(), Failure> {
        let bytes = fs::read(path).map_err(|e| gecx::Error::io(path, e))?;
        self.inputs.insert(path.display().to_string(), sha256_hex(&bytes));
        Ok(())
    }

    pub fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let text = gecx::error::read_to_string(path)?;
        self.inputs.insert(path.display().to_string(), sha256_hex(text.as_bytes()));
        Ok(text)
    }

    /// Writes to `path`, or to stdout when there is none.
    pub fn write(&mut self, path: Option<&Path>, content: &str) -> Result<(), Failure> {
        match path {
            Some(p) => {
                if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    fs::create_dir_all(dir).map_err(|e| gecx::Error::io(dir, e))?;
                }
                fs::write(p, content).map_err(|e| gecx::Error::io(p, e))?;
                self.outputs.push(p.to_path_buf());
            }
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(content.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|e| gecx::Error::io("<stdout>", e))?;
            }
        }
        Ok(())
    }

    /// Writes the manifest to the explicit path, else next to the first
    /// output file, else to stderr.
    pub fn finish(self) -> Result<(), Failure> {
        let target = self.manifest_path.clone().or_else(|| {
            self.outputs.first().map(|p| {
                let mut name = p.as_os_str().to_owned();
                name.push(".manifest.json");
                PathBuf::from(name)
            })
        });
        let manifest = RunManifest {
            command: self.command,
            config: self.config,
            inputs: self.inputs,
            outputs: self.outputs.iter().map(|p| p.display().to_string()).collect(),
            seed: self.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            duration_secs: self.started.elapsed().as_secs_f64(),
        };
        let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        match target {
            Some(p) => fs::write(&p, json + "\n").map_err(|e| gecx::Error::io(&p, e))?,
            None => eprintln!("{json}"),
        }
        Ok(())
    }
}
