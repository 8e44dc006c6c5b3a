//! Run configuration, initial data and on-disk formats.

mod config;
mod files;
mod initial;
mod run;

pub use config::{InitialData, RunConfig, SolverSection, VerificationSection};
pub use files::{
    read_diagnostics, read_profile, read_snapshot, write_diagnostics, write_profile, write_snapshot, SnapshotFile,
    SNAPSHOT_MAGIC, SNAPSHOT_VERSION,
};
pub use initial::{compact_bump, gaussian, power_tail};
pub use run::{read_run, snapshot_path, write_run, RunData, CONFIG_FILE, DIAGNOSTICS_FILE, INITIAL_FILE};
