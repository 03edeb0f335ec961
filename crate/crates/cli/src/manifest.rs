//! `manifest.json`: one per run, written next to the outputs.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Serialize)]
struct FileDigest {
    path: String,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    command_line: &'a [String],
    seed: Option<u64>,
    tool_version: String,
    inputs: Vec<FileDigest>,
    outputs: Vec<FileDigest>,
    wall_time_s: f64,
}

pub fn tool_version() -> String {
    format!("v{}", env!("CARGO_PKG_VERSION"))
}

fn digest(path: &Path) -> Result<FileDigest> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(FileDigest {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    })
}

/// Collects what a run read and wrote, then records it.
pub struct Recorder {
    started: Instant,
    seed: Option<u64>,
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
}

impl Recorder {
    pub fn start(seed: Option<u64>) -> Self {
        Self {
            started: Instant::now(),
            seed,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn input(&mut self, path: impl Into<PathBuf>) {
        self.inputs.push(path.into());
    }

    pub fn output(&mut self, path: impl Into<PathBuf>) {
        self.outputs.push(path.into());
    }

    /// Writes `manifest.json` into `dir` and returns its path.
    pub fn finish(self, dir: &Path, argv: &[String]) -> Result<PathBuf> {
        let manifest = Manifest {
            command_line: argv,
            seed: self.seed,
            tool_version: tool_version(),
            inputs: self
                .inputs
                .iter()
                .map(|p| digest(p))
                .collect::<Result<_>>()?,
            outputs: self
                .outputs
                .iter()
                .map(|p| digest(p))
                .collect::<Result<_>>()?,
            wall_time_s: self.started.elapsed().as_secs_f64(),
        };
        let path = dir.join(MANIFEST_NAME);
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}
