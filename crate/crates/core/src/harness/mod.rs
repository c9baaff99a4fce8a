//! Experiment harness: run configuration, solves, sweeps and their outputs.

pub mod config;
pub mod output;
pub mod run;

pub use config::RunConfig;
pub use run::{
    energy_study, run_case, run_solve, sweep_delta, sweep_h, EnergySeries, RunReport, Snapshot, SweepKind, SweepResult,
    SweepRow,
};
