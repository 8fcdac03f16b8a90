//! Scenario runner for `slitwave`: configuration files in, CSV tables and a
//! checksummed manifest out.

pub mod config;
pub mod emit;
mod error;
pub mod manifest;
pub mod run;

pub use config::{parse_config, Output, ScenarioConfig};
pub use error::{CliError, ConfigError};
pub use manifest::RunManifest;
pub use run::{run_oracles, run_scenario};
