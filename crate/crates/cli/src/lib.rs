//! Batch pipeline around `scientrix-core`: reads field-tagged exports,
//! runs the indicator stages and writes CSV, JSON and SVG reports plus a
//! manifest of digests.

pub mod config;
pub mod manifest;
pub mod output;
pub mod present;
mod stages;
pub mod svg;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use config::RunConfig;
pub use manifest::{Manifest, StageRecord};
pub use stages::{run_pipeline, run_stage, Stage, OUTPUT_FILES};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{stage}: {message}")]
    Stage { stage: String, message: String },
    #[error("{stage}: missing intermediate {} (run `scientrix {needs}` first)", path.display())]
    MissingIntermediate {
        stage: String,
        path: PathBuf,
        needs: String,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// 1 for usage errors, 2 for anything wrong with the data.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            _ => 2,
        }
    }

    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn stage(stage: Stage, message: impl Into<String>) -> Self {
        CliError::Stage {
            stage: stage.name().to_string(),
            message: message.into(),
        }
    }
}
