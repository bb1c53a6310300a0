//! Declarative experiment runner: flat key-value configs in, deterministic
//! text tables or JSON documents out.

pub mod config;
pub mod emit;
pub mod run;

pub use config::{Experiment, ExperimentConfig, OutcomeChoice};
pub use emit::{emit_results, fmt12, render, OutputFormat, ResultTable, RunOutput, ARTIFACT_VERSION};
pub use run::run;
