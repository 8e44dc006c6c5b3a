use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::files::read_snapshot;
use super::initial::{compact_bump, gaussian, power_tail};
use crate::error::{io_err, Error, Result};
use crate::grid::{random_band_limited, GridSpec, RealField};
use crate::solver::{PicardOptions, Scheme, SolverConfig};

fn yes() -> bool {
    true
}

fn default_cfl() -> f64 {
    0.5
}

fn default_picard() -> usize {
    8
}

fn default_output() -> PathBuf {
    PathBuf::from("run")
}

/// Solver fields of a run file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub alpha: f64,
    pub dt: f64,
    pub t_end: f64,
    pub n: usize,
    pub box_length: f64,
    #[serde(default = "default_scheme")]
    pub scheme: Scheme,
    #[serde(default = "yes")]
    pub dealias: bool,
    #[serde(default = "yes")]
    pub nonlinear: bool,
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
    #[serde(default = "default_cfl")]
    pub cfl_safety: f64,
    #[serde(default = "default_picard")]
    pub picard_iterations: usize,
}

fn default_scheme() -> Scheme {
    Scheme::Ifrk4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    Gaussian { amplitude: f64, widths: [f64; 2] },
    CompactBump { amplitude: f64, radius: f64 },
    PowerTail { amplitude: f64, gamma: f64, scale: f64 },
    FromFile { path: PathBuf },
    /// Band-limited random field drawn from the run seed.
    Random { kmax: usize },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationSection {
    #[serde(default)]
    pub checks: Vec<String>,
    /// Fit range for decay slopes; defaults to the last 1.5 decades of the run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_range: Option<[f64; 2]>,
}

/// Everything a `simulate` run needs.
///
/// ```toml
/// output_dir = "runs/a15"
/// seed = 7
///
/// [solver]
/// alpha = 1.5
/// dt = 0.01
/// t_end = 2.0
/// n = 128
/// box_length = 40.0
/// snapshot_times = [0.1, 1.0, 2.0]
///
/// [initial_data]
/// kind = "gaussian"
/// amplitude = 1.0
/// widths = [1.2, 0.7]
///
/// [verification]
/// checks = ["ratio", "max_principle"]
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    pub solver: SolverSection,
    pub initial_data: InitialData,
    #[serde(default)]
    pub verification: VerificationSection,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml()?).map_err(io_err(path))
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.solver.n, self.solver.box_length)
    }

    pub fn solver_config(&self) -> Result<SolverConfig> {
        let s = &self.solver;
        let mut cfg = SolverConfig::new(s.alpha, self.grid()?, s.t_end);
        cfg.dt = s.dt;
        cfg.scheme = s.scheme;
        cfg.dealias = s.dealias;
        cfg.nonlinear = s.nonlinear;
        cfg.cfl_safety = s.cfl_safety;
        if !s.snapshot_times.is_empty() {
            cfg.snapshot_times = s.snapshot_times.clone();
        }
        cfg.picard = PicardOptions {
            n_iter: s.picard_iterations,
            ..PicardOptions::default()
        };
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = self.solver_config().map_err(|e| Error::Config(format!("[solver]: {e}")))?;
        cfg.validate().map_err(|e| Error::Config(format!("[solver]: {e}")))?;
        if let InitialData::PowerTail { gamma, .. } = self.initial_data {
            if gamma <= self.solver.alpha - 1.0 {
                return Err(Error::Config(format!(
                    "[initial_data].gamma = {gamma} must exceed alpha − 1 = {}",
                    self.solver.alpha - 1.0
                )));
            }
        }
        if let Some([a, b]) = self.verification.fit_range {
            if !(a > 0.0 && a < b) {
                return Err(Error::Config("[verification].fit_range must satisfy 0 < a < b".into()));
            }
        }
        Ok(())
    }

    /// Samples θ0 on the run grid. Relative file paths resolve against `base`.
    pub fn initial_field(&self, base: &Path) -> Result<RealField> {
        let grid = self.grid()?;
        match &self.initial_data {
            InitialData::Gaussian { amplitude, widths } => gaussian(grid, *amplitude, *widths),
            InitialData::CompactBump { amplitude, radius } => compact_bump(grid, *amplitude, *radius),
            InitialData::PowerTail { amplitude, gamma, scale } => {
                power_tail(grid, *amplitude, *gamma, *scale, self.solver.alpha)
            }
            InitialData::FromFile { path } => {
                let path = if path.is_absolute() { path.clone() } else { base.join(path) };
                let file = read_snapshot(&path)?;
                if file.theta.grid() != &grid {
                    return Err(Error::Config(format!(
                        "{} holds an n = {} grid, the run expects n = {}",
                        path.display(),
                        file.theta.grid().n(),
                        grid.n()
                    )));
                }
                Ok(file.theta)
            }
            InitialData::Random { kmax } => random_band_limited(grid, *kmax, self.seed),
        }
    }
}
