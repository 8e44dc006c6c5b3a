use std::fs;
use std::path::Path;

use crate::error::{io_err, Error, Result};
use crate::grid::{GridSpec, RealField};
use crate::kernel::KernelProfile;
use crate::solver::DiagnosticRecord;

pub const SNAPSHOT_MAGIC: &[u8; 4] = b"SQGF";
pub const SNAPSHOT_VERSION: u32 = 1;
const HEADER: usize = 4 + 4 + 8 + 8 * 3;

/// Contents of a field file: header fields plus the samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotFile {
    pub t: f64,
    pub alpha: f64,
    pub theta: RealField,
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::MissingFile(path.to_path_buf())
        } else {
            Error::Io {
                path: path.to_path_buf(),
                source: e,
            }
        }
    })
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    fs::write(path, bytes).map_err(io_err(path))
}

/// Layout (little-endian): "SQGF", u32 version, u64 n, f64 L, f64 t, f64 α,
/// then n·n f64 samples, row-major with x2 slow.
pub fn write_snapshot(path: &Path, t: f64, alpha: f64, theta: &RealField) -> Result<()> {
    let grid = theta.grid();
    let mut out = Vec::with_capacity(HEADER + 8 * grid.len());
    out.extend_from_slice(SNAPSHOT_MAGIC);
    out.extend_from_slice(&SNAPSHOT_VERSION.to_le_bytes());
    out.extend_from_slice(&(grid.n() as u64).to_le_bytes());
    for v in [grid.length(), t, alpha] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for v in theta.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    write_bytes(path, &out)
}

pub fn read_snapshot(path: &Path) -> Result<SnapshotFile> {
    let bytes = read_bytes(path)?;
    let bad = |msg: &str| Error::Format {
        path: path.to_path_buf(),
        msg: msg.into(),
    };
    if bytes.len() < HEADER || &bytes[..4] != SNAPSHOT_MAGIC {
        return Err(bad("not a field file"));
    }
    let word = |at: usize| -> [u8; 8] { bytes[at..at + 8].try_into().expect("8 bytes") };
    let version = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes"));
    if version != SNAPSHOT_VERSION {
        return Err(bad(&format!("unsupported version {version}")));
    }
    let n = u64::from_le_bytes(word(8)) as usize;
    let length = f64::from_le_bytes(word(16));
    let t = f64::from_le_bytes(word(24));
    let alpha = f64::from_le_bytes(word(32));
    let grid = GridSpec::new(n, length).map_err(|e| bad(&e.to_string()))?;
    if bytes.len() != HEADER + 8 * grid.len() {
        return Err(bad("payload length does not match the header"));
    }
    let values = (0..grid.len()).map(|k| f64::from_le_bytes(word(HEADER + 8 * k))).collect();
    let theta = RealField::new(grid, values).map_err(|e| bad(&e.to_string()))?;
    Ok(SnapshotFile { t, alpha, theta })
}

pub fn write_profile(path: &Path, profile: &KernelProfile) -> Result<()> {
    write_bytes(path, &profile.to_bytes())
}

pub fn read_profile(path: &Path) -> Result<KernelProfile> {
    let bytes = read_bytes(path)?;
    KernelProfile::from_bytes(&bytes).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })
}

/// CSV with columns time, l2, lcrit, linf, riesz_linf, mean.
pub fn write_diagnostics(path: &Path, records: &[DiagnosticRecord]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let mut w = csv::Writer::from_path(path)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(io_err(path))
}

pub fn read_diagnostics(path: &Path) -> Result<Vec<DiagnosticRecord>> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}
