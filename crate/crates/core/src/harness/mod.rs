//! Command-line harness: configuration, orchestration and persistence.

pub mod cli;
pub mod config;
pub mod output;
pub mod run;

pub use config::{parse_config, Experiment, ExperimentConfig, Format};
pub use output::{read_csv, render_results, write_results, ResultRow, Value};
pub use run::{run_experiment, run_point, ResultRecord};
