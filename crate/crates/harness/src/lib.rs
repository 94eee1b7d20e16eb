//! Configuration-driven runner for the `reparam-core` experiments.
//!
//! A run reads an [`ExperimentConfig`], executes one scenario and writes
//! `manifest.json` plus optional CSV files into the output directory. The
//! manifest is written even when the scenario fails, with `error` set.

// `!(x > 0.0)` is used on purpose so NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;

pub mod config;
pub mod io;
pub mod manifest;
pub mod presets;
mod scenarios;

pub use config::{ExperimentConfig, Scenario};
pub use manifest::{run, RunManifest};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Parse(String),
    #[error("config: {field}: {constraint}")]
    Invalid { field: String, constraint: String },
    #[error("{}: {message}", path.display())]
    Io { path: PathBuf, message: String },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error(transparent)]
    Core(#[from] reparam_core::Error),
}

impl HarnessError {
    /// Process exit code: 1 for problems found before the scenario starts,
    /// 2 for failures while it runs.
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Core(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, err: impl std::fmt::Display) -> Self {
        HarnessError::Io {
            path: path.into(),
            message: err.to_string(),
        }
    }
}
