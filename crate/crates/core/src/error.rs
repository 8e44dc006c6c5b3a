use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("field shape {got} does not match grid with {expected} points")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("field contains a non-finite value at index {index}")]
    NonFinite { index: usize },
    #[error("parameter `{name}` = {value} out of range: {expected}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("differentiation order {order} exceeds the supported maximum {max}")]
    OrderTooHigh { order: usize, max: usize },
    #[error("quadrature failed to reach tolerance {tol:e} on [{a}, {b}] (estimate {estimate:e})")]
    Quadrature {
        a: f64,
        b: f64,
        tol: f64,
        estimate: f64,
    },
    #[error("kernel profile: {0}")]
    Profile(String),
    #[error("time step {dt:e} violates the CFL bound {max_dt:e}")]
    CflViolation { dt: f64, max_dt: f64 },
    #[error("solution blew up at t = {t}")]
    BlowUp { t: f64 },
    #[error("Picard iteration diverged: successive distances {distances:?}")]
    PicardDivergence { distances: Vec<f64> },
    #[error("empty window: no grid point passed the window mask and denominator floor")]
    EmptyWindow,
    #[error("window radius {radius} exceeds the admissible radius {limit} for the box")]
    WindowTooLarge { radius: f64, limit: f64 },
    #[error("support of the sampled function is not contained in the quadrature domain")]
    SupportNotContained,
    #[error("{0}")]
    InsufficientData(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("format error in {path}: {msg}")]
    Format { path: PathBuf, msg: String },
    #[error("missing file {0}")]
    MissingFile(PathBuf),
    #[error("alpha mismatch: run has {run}, kernel profile has {profile}")]
    AlphaMismatch { run: f64, profile: f64 },
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    ok: bool,
    expected: &'static str,
) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            expected,
        })
    }
}

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
    let path = path.into();
    move |source| Error::Io { path, source }
}
