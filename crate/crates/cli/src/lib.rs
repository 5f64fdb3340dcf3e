//! Experiment harness for the quartic PAM solver: builds condensate
//! instances, runs PAM/ADMM over seeded starts and writes CSV/TSV results.

pub mod cli;
pub mod commands;
pub mod experiment;
pub mod output;
pub mod runner;

pub use experiment::{
    AlphaSetting, Cell, ExperimentSpec, InitKind, Method, Preset, RunSettings, Solver,
};
pub use runner::{build_instance, run_cells, run_on_instance, Instance, ResultRow, RunOutcome};
