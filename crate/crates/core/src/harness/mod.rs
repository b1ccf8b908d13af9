//! Config-driven experiment runs with CSV, JSON summary and manifest output.

mod config;
mod output;
mod run;
pub mod sources;

pub use config::{ExperimentConfig, ExperimentKind, Violation};
pub use output::{round_json, write_summary, Cell, Table};
pub use run::{
    config_hash, execute, run, RowStatus, RunManifest, RunOutput, AUTOMORPHISM_TOL, BALL_SLACK_TOL, DEMO_SUP_TOL,
    PLURIHARMONIC_TOL,
};
