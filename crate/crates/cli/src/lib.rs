//! Configuration, presets and output writers for the `tripod` command.

pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{load_config, load_preset, parse_config, ExperimentConfig, Mode, SweepPoint};
pub use error::CliError;
pub use run::{run, Command, Overrides};
