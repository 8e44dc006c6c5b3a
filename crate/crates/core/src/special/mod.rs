//! Special functions and singular quadrature.

mod gamma;
mod quadrature;
mod singular;
mod timegrid;

pub use gamma::{beta, gamma, ln_gamma};
pub use quadrature::{adaptive, first_derivative_weights, gauss_jacobi, gauss_legendre, AdaptiveOptions, GaussRule, Neumaier};
pub use singular::{
    apply_t_gamma, corollary_sweep, default_v_sweep, inner_integral, inner_integral_via_lemma,
    lemma_tech_integral, lemma_tech_sweep, t_gamma_constants, RatioSweep, Semigroup, TGammaConstants,
    TimeSeries, TorusSemigroup,
};
pub use timegrid::{
    singular_integral, singular_time_convolution, GridResolution, Side, TimeCell, TimeGrid, DEFAULT_JACOBI_NODES,
};
