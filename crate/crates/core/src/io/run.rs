use std::path::{Path, PathBuf};

use super::config::RunConfig;
use super::files::{read_diagnostics, read_snapshot, write_diagnostics, write_snapshot, SnapshotFile};
use crate::error::{io_err, Error, Result};
use crate::grid::RealField;
use crate::solver::{DiagnosticRecord, SimulationOutput};

pub const CONFIG_FILE: &str = "config.toml";
pub const INITIAL_FILE: &str = "initial.sqgf";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";

pub fn snapshot_path(dir: &Path, k: usize) -> PathBuf {
    dir.join("snapshots").join(format!("snap_{k:04}.sqgf"))
}

/// Everything `simulate` leaves in a run directory.
#[derive(Debug, Clone)]
pub struct RunData {
    pub config: RunConfig,
    pub theta0: RealField,
    pub snapshots: Vec<SnapshotFile>,
    pub records: Vec<DiagnosticRecord>,
}

/// Layout: config.toml, initial.sqgf, snapshots/snap_KKKK.sqgf (one per
/// snapshot time, in order) and diagnostics.csv.
pub fn write_run(dir: &Path, config: &RunConfig, theta0: &RealField, output: &SimulationOutput) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    config.save(&dir.join(CONFIG_FILE))?;
    let alpha = config.solver.alpha;
    write_snapshot(&dir.join(INITIAL_FILE), 0.0, alpha, theta0)?;
    for (k, s) in output.snapshots.iter().enumerate() {
        write_snapshot(&snapshot_path(dir, k), s.t, alpha, &s.theta)?;
    }
    write_diagnostics(&dir.join(DIAGNOSTICS_FILE), &output.records)
}

pub fn read_run(dir: &Path) -> Result<RunData> {
    let config = RunConfig::load(&dir.join(CONFIG_FILE))?;
    let theta0 = read_snapshot(&dir.join(INITIAL_FILE))?.theta;
    let times = config.solver_config()?.snapshot_times;
    let mut snapshots = Vec::with_capacity(times.len());
    for (k, &t) in times.iter().enumerate() {
        let path = snapshot_path(dir, k);
        let file = read_snapshot(&path)?;
        if (file.t - t).abs() > 1e-12 * t.max(1.0) || file.alpha != config.solver.alpha {
            return Err(Error::Format {
                path,
                msg: format!("expected t = {t}, α = {}; found t = {}, α = {}", config.solver.alpha, file.t, file.alpha),
            });
        }
        snapshots.push(file);
    }
    let records = read_diagnostics(&dir.join(DIAGNOSTICS_FILE))?;
    Ok(RunData {
        config,
        theta0,
        snapshots,
        records,
    })
}
