//! Config documents, CSV emission and run orchestration.

mod config;
mod csv;
mod run;

pub use config::{parse_config, parse_config_for, serialize_config, ConfigError};
pub use csv::{barrier_csv, epr_csv, format_sig12, profile_csv, Header, PROFILE_HEADER, TIMESTAMP_PREFIX};
pub use run::{config_hash, run_experiment, RunManifest, MANIFEST_NAME, TOOL_VERSION};

use thiserror::Error;

use crate::experiments::ExperimentError;
use crate::sampler::SamplerError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("config is for `{found}`, not `{expected}`")]
    Mismatch { expected: String, found: String },
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error("runtime error: {0}")]
    Runtime(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    /// 1 for configuration problems, 2 for everything that fails at run time.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Mismatch { .. } => EXIT_CONFIG,
            RunError::Experiment(e) => match e {
                ExperimentError::Geometry(_) | ExperimentError::Config(_) | ExperimentError::Density(_) => EXIT_CONFIG,
                ExperimentError::Sampler(SamplerError::InvalidConfig(_) | SamplerError::InvalidScreen(_)) => {
                    EXIT_CONFIG
                }
                _ => EXIT_RUNTIME,
            },
            RunError::Runtime(_) | RunError::Io(_) => EXIT_RUNTIME,
        }
    }
}
