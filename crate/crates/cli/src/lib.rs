//! Experiment runner for the `arealab` numerics: declarative JSON configs,
//! CSV scaling tables and `report.json` summaries with pass/fail verdicts.

pub mod catalog;
pub mod config;
pub mod experiments;
pub mod report;
pub mod runner;

pub use config::{ConfigError, ExperimentConfig, ExperimentKind};
pub use report::ScalingReport;
pub use runner::{configure_threads, run, run_experiment, CliError, RunOutput};
