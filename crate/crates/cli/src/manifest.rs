//! `manifest.json`: what was run, on what, and what came out.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::output::{file_digest, pretty_json, write_atomic};
use crate::CliError;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub counts: BTreeMap<String, u64>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub config: BTreeMap<String, String>,
    /// Input path as configured, to sha256 of its content.
    pub inputs: BTreeMap<String, String>,
    pub stages: BTreeMap<String, StageRecord>,
    /// Output file name, relative to the output directory, to sha256.
    pub outputs: BTreeMap<String, String>,
}

impl Manifest {
    pub fn new(config: BTreeMap<String, String>) -> Self {
        Manifest {
            tool: env!("CARGO_PKG_NAME").trim_end_matches("-cli").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            inputs: BTreeMap::new(),
            stages: BTreeMap::new(),
            outputs: BTreeMap::new(),
        }
    }

    /// Reads the manifest in `dir`, if there is one.
    pub fn load(dir: &Path) -> Result<Option<Manifest>, CliError> {
        let path = dir.join(MANIFEST_FILE);
        if !path.exists() {
            return Ok(None);
        }
        let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
        serde_json::from_str(&text)
            .map(Some)
            .map_err(|e| CliError::Stage {
                stage: "manifest".into(),
                message: format!("{}: {e}", path.display()),
            })
    }

    pub fn save(&self, dir: &Path) -> Result<(), CliError> {
        write_atomic(&dir.join(MANIFEST_FILE), &pretty_json(self))
    }

    /// Output files whose current content no longer matches the recorded
    /// digest, with the reason.
    pub fn verify(&self, dir: &Path) -> Vec<(String, String)> {
        let mut problems = Vec::new();
        for (name, digest) in &self.outputs {
            let path = dir.join(name);
            match file_digest(&path) {
                Ok(actual) if &actual == digest => {}
                Ok(actual) => problems.push((
                    name.clone(),
                    format!("digest {actual} != recorded {digest}"),
                )),
                Err(_) => problems.push((name.clone(), "missing".to_string())),
            }
        }
        problems
    }
}
