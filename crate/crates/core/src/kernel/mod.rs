//! The isotropic α-stable density on R², its derivatives and the estimates
//! built on it.

mod checks;
mod derivative;
mod hankel;
mod profile;
mod tail;
#[cfg(test)]
mod tests;

pub use checks::{
    check_two_sided_estimate, convolve_whole_space, levy_density, lower_bound_check, riesz_kernel_bound_check,
    torus_kernel, torus_kernel_derivative, torus_riesz_kernel, TwoSidedBounds,
};
pub use derivative::{
    kernel_derivative_eval, kernel_eval, DerivativePatch, DerivativeTables, KernelDerivativeProfile,
    MAX_KERNEL_DERIVATIVE,
};
pub use profile::{build_profile, default_r_max, KernelProfile};

use crate::error::{check_range, Result};

/// p(1, r) by direct Hankel quadrature, without a table. Accepts the Cauchy
/// endpoint α = 1 so that both closed forms can serve as oracles.
pub fn radial_density(alpha: f64, r: f64) -> Result<f64> {
    check_range("alpha", alpha, (1.0..=2.0).contains(&alpha), "alpha ∈ [1, 2]")?;
    check_range("r", r, r >= 0.0 && r.is_finite(), "r ≥ 0")?;
    hankel::density(alpha, r)
}
