//! Mild solutions of θ_t + R⊥θ·∇θ + (−Δ)^{α/2}θ = 0 on the periodic box.
//!
//! Two independent routes: an integrating-factor RK4 stepper and Picard
//! iteration on the Duhamel formula. Both work on Fourier coefficients and
//! share the nonlinearity N(θ) = −∇·(θ R⊥θ).

mod picard;
mod stepper;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::grid::{lp_norm, GridSpec, RealField, Spectral, SpectralField};
use crate::special::GridResolution;

pub use picard::{picard_iterate, PicardResult};
pub use stepper::{run_simulation, run_simulation_with, step_ifrk4, SimulationOutput, Snapshot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Ifrk4,
    Picard,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardOptions {
    pub n_iter: usize,
    /// Early exit once the successive-iterate distance drops below this.
    pub tol: f64,
    /// Chebyshev–Lobatto collocation times on [0, t].
    pub nodes: usize,
    /// Composite time grid used for every Duhamel integral.
    pub resolution: GridResolution,
}

impl Default for PicardOptions {
    fn default() -> Self {
        Self {
            n_iter: 8,
            tol: 1e-10,
            nodes: 13,
            resolution: GridResolution { cells: 8, points: 4 },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub alpha: f64,
    /// Largest step; the CFL bound may shorten it.
    pub dt: f64,
    pub t_end: f64,
    pub grid: GridSpec,
    pub scheme: Scheme,
    pub dealias: bool,
    /// Off gives the pure fractional heat flow.
    pub nonlinear: bool,
    pub snapshot_times: Vec<f64>,
    pub cfl_safety: f64,
    pub picard: PicardOptions,
}

impl SolverConfig {
    pub fn new(alpha: f64, grid: GridSpec, t_end: f64) -> Self {
        Self {
            alpha,
            dt: 1e-2,
            t_end,
            grid,
            scheme: Scheme::Ifrk4,
            dealias: true,
            nonlinear: true,
            snapshot_times: vec![t_end],
            cfl_safety: 0.5,
            picard: PicardOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_solver_alpha(self.alpha)?;
        check_range("dt", self.dt, self.dt > 0.0 && self.dt.is_finite(), "dt > 0")?;
        check_range("t_end", self.t_end, self.t_end >= 0.0 && self.t_end.is_finite(), "t_end >= 0")?;
        check_range(
            "cfl_safety",
            self.cfl_safety,
            self.cfl_safety > 0.0 && self.cfl_safety <= 1.0,
            "(0, 1]",
        )?;
        let mut prev = f64::NEG_INFINITY;
        for &s in &self.snapshot_times {
            check_range("snapshot time", s, s >= 0.0 && s <= self.t_end, "within [0, t_end]")?;
            if s <= prev {
                return Err(Error::Config("snapshot_times must be strictly increasing".into()));
            }
            prev = s;
        }
        if self.picard.nodes < 2 {
            return Err(Error::Config("Picard needs at least two collocation nodes".into()));
        }
        Ok(())
    }
}

pub(crate) fn check_solver_alpha(alpha: f64) -> Result<()> {
    check_range("alpha", alpha, alpha > 1.0 && alpha < 2.0, "(1, 2)")
}

/// Current time, field and step count of a run.
#[derive(Debug, Clone)]
pub struct SimulationState {
    pub t: f64,
    pub theta: RealField,
    pub theta_hat: SpectralField,
    pub step_count: usize,
}

/// Scalar diagnostics at one time: ‖θ‖_2, ‖θ‖_{2/(α−1)}, ‖θ‖_∞, sup|R⊥θ|, mean θ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRecord {
    pub time: f64,
    pub l2: f64,
    pub lcrit: f64,
    pub linf: f64,
    pub riesz_linf: f64,
    pub mean: f64,
}

/// Precomputed multipliers shared by both solution routes.
#[derive(Debug, Clone)]
pub struct Propagator {
    spectral: Spectral,
    alpha: f64,
    lambda: Vec<f64>,
    mask: Option<Vec<bool>>,
    nonlinear: bool,
}

impl Propagator {
    pub fn new(config: &SolverConfig) -> Result<Self> {
        config.validate()?;
        let spectral = Spectral::new(config.grid);
        let lambda = (0..config.grid.len())
            .map(|idx| spectral.abs_xi(idx).powf(config.alpha))
            .collect();
        let mask = config.dealias.then(|| spectral.dealias_mask());
        Ok(Self {
            spectral,
            alpha: config.alpha,
            lambda,
            mask,
            nonlinear: config.nonlinear,
        })
    }

    pub fn spectral(&self) -> &Spectral {
        &self.spectral
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// e^{−τ|ξ|^α} û.
    pub fn linear(&self, u: &SpectralField, tau: f64) -> SpectralField {
        self.spectral
            .apply_symbol(u, |idx| Complex64::new((-tau * self.lambda[idx]).exp(), 0.0))
    }

    /// N̂ = −(∇·(θ R⊥θ))^, zero when the nonlinearity is switched off.
    pub fn nonlinear(&self, u: &SpectralField) -> Result<SpectralField> {
        if !self.nonlinear {
            return Ok(SpectralField::zeros(*self.spectral.grid()));
        }
        flux_divergence(&self.spectral, u, self.mask.as_deref())
    }

    /// sup |R⊥θ|.
    pub fn max_velocity(&self, u: &SpectralField) -> f64 {
        let (v1, v2) = self.spectral.riesz_perp_spectral(u);
        let (v1, v2) = (self.spectral.inverse(&v1), self.spectral.inverse(&v2));
        v1.values()
            .iter()
            .zip(v2.values())
            .fold(0.0, |m, (a, b)| m.max(a.hypot(*b)))
    }

    pub fn record(&self, t: f64, theta: &RealField, theta_hat: &SpectralField) -> Result<DiagnosticRecord> {
        Ok(DiagnosticRecord {
            time: t,
            l2: lp_norm(theta, 2.0)?,
            lcrit: lp_norm(theta, 2.0 / (self.alpha - 1.0))?,
            linf: theta.max_abs(),
            riesz_linf: self.max_velocity(theta_hat),
            mean: theta.mean(),
        })
    }
}

fn flux_divergence(spectral: &Spectral, u: &SpectralField, mask: Option<&[bool]>) -> Result<SpectralField> {
    let theta = spectral.inverse(u);
    let (v1, v2) = spectral.riesz_perp_spectral(u);
    let (v1, v2) = (spectral.inverse(&v1), spectral.inverse(&v2));
    let f1 = v1.zip_with(&theta, |a, b| a * b)?;
    let f2 = v2.zip_with(&theta, |a, b| a * b)?;
    let (mut g1, mut g2) = (spectral.forward(&f1)?, spectral.forward(&f2)?);
    if let Some(mask) = mask {
        for (c, &keep) in g1.coeffs_mut().iter_mut().zip(mask) {
            if !keep {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        for (c, &keep) in g2.coeffs_mut().iter_mut().zip(mask) {
            if !keep {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }
    Ok(spectral.divergence_spectral(&g1, &g2).scaled(-1.0))
}

/// N(θ) = −∇·(θ R⊥θ) in physical space, optionally 2/3-dealiased.
pub fn nonlinear_term(spectral: &Spectral, theta: &RealField, dealias: bool) -> Result<RealField> {
    let u = spectral.forward(theta)?;
    let mask = dealias.then(|| spectral.dealias_mask());
    Ok(spectral.inverse(&flux_divergence(spectral, &u, mask.as_deref())?))
}
