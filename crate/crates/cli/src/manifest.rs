//! Run manifests: every file-producing invocation writes one manifest
//! referencing its outputs, with enough context to reproduce the run.
//! Integer outputs are deterministic across thread counts, so re-running
//! a manifest's command line reproduces them byte for byte.

use anyhow::Result;
use powersum_core::Budget;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub code_version: &'static str,
    pub budget: Budget,
    pub threads: Option<usize>,
    pub cache_dir: Option<String>,
    pub started: String,
    pub finished: String,
    pub input_hashes: BTreeMap<String, String>,
    pub outputs: Vec<String>,
}

pub struct ManifestBuilder {
    command_line: Vec<String>,
    started: chrono::DateTime<chrono::Utc>,
}

impl ManifestBuilder {
    pub fn start() -> Self {
        ManifestBuilder {
            command_line: std::env::args().collect(),
            started: chrono::Utc::now(),
        }
    }

    /// Write `<first output>.manifest.json` referencing all outputs.
    pub fn finish(
        self,
        budget: &Budget,
        threads: Option<usize>,
        cache_dir: Option<&Path>,
        outputs: &[PathBuf],
    ) -> Result<Option<PathBuf>> {
        let Some(first) = outputs.first() else {
            return Ok(None);
        };
        let mut hasher = Sha256::new();
        for arg in &self.command_line {
            hasher.update(arg.as_bytes());
            hasher.update([0u8]);
        }
        let mut input_hashes = BTreeMap::new();
        input_hashes.insert("argv".to_string(), format!("{:x}", hasher.finalize()));
        let manifest = RunManifest {
            command_line: self.command_line,
            code_version: env!("CARGO_PKG_VERSION"),
            budget: budget.clone(),
            threads,
            cache_dir: cache_dir.map(|p| p.display().to_string()),
            started: self.started.to_rfc3339(),
            finished: chrono::Utc::now().to_rfc3339(),
            input_hashes,
            outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        };
        let path = PathBuf::from(format!("{}.manifest.json", first.display()));
        std::fs::write(&path, serde_json::to_string_pretty(&manifest)?)?;
        Ok(Some(path))
    }
}
