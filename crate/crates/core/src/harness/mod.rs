//! Seeded experiment drivers, CSV results with manifests, and the command
//! surface of the `perturba` binary.
//!
//! Exit codes: 0 on success, 2 when the input is well formed but too far
//! from the structure for a correction to apply, 1 otherwise.

mod cli;
mod config;
mod experiment;

pub use cli::{hypothesis, run, EXIT_HYPOTHESIS, EXIT_INVALID};
pub use config::{parse_pattern, Experiment, ExperimentConfig, SEED_ENV};
pub use experiment::{run_experiment, trial_rng, write_csv, Manifest, ResultRow, CSV_COLUMNS};
