//! Library side of the `critlab` binary: config parsing and command dispatch.

pub mod config;
pub mod params;
pub mod run;

pub use config::{parse_config, Command, ConfigError, ExperimentConfig, Format};
pub use run::{execute, write_artifacts, Artifact, CliError};
