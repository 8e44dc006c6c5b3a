//! Pass/fail diagnostics over simulation output.
//!
//! Every check is a pure function of snapshot data. Thresholds are harness
//! configuration and are reported next to the measured values.

mod fit;
mod ratio;
mod report;

pub use fit::{
    decay_slope_fit, expected_decay_slope, fit_power_law, kernel_lp_slope_fit, riesz_limit_check, Quantity,
    RieszLimit, SlopeFit,
};
pub use ratio::{
    above_critical_local_check, gradient_bound_diag, limit_scan, ratio_diagnostics, LimitScan, RatioDiagnostic,
    Frame, ScanMode, Window, DEFAULT_FLOOR,
};
pub use report::{summary_table, write_report_csv, Verdict};
