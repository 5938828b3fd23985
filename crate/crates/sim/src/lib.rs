//! Batch experiment runner for the aerial active-RIS planner: flat TOML
//! configs, seeded parameter sweeps, and CSV/JSON output.

pub mod config;
pub mod experiment;
pub mod output;
pub mod stats;

pub use config::{ConfigError, ExperimentConfig, Method, SweepAxis};
pub use experiment::{run_experiment, Row, SweepResult};
