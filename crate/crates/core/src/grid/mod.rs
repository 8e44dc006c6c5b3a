//! Periodic-box fields, Fourier transforms and Fourier-multiplier operators.

mod field;
mod random;
mod spectral;

pub use field::{GridSpec, MultiIndex, RealField, SpectralField, MAX_DERIVATIVE_ORDER};
pub use random::random_band_limited;
pub use spectral::{lp_norm, magnitude, Axis, Spectral};
