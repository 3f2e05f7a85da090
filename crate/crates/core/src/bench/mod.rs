//! Experiment harness: generators, method comparison and persisted results.

pub mod config;
pub mod experiment;
pub mod generate;

pub use config::{BenchMethod, ExperimentConfig};
pub use experiment::{read_rows_csv, run_experiment, summarize, ExperimentOutput, ExperimentRow, SizeSummary};
pub use generate::{generate, random_inverse_nonnegative, random_totally_positive, Family, GeneratorSpec};
