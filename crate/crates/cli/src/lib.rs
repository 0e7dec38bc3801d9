//! Command-line front end for the revival library: scenario configs,
//! presets, output files and feature extraction.

pub mod config;
pub mod error;
pub mod features;
pub mod presets;
pub mod scenario;

pub use config::{LoadedConfig, Overrides, ScenarioConfig};
pub use error::{CliError, Result};
pub use scenario::{run_scenario, Scenario};
