use std::sync::Arc;

use crate::error::{check_range, Error, Result};
use crate::grid::MultiIndex;

use super::hankel;
use super::profile::KernelProfile;
use super::tail::TailSeries;

/// Largest derivative order tabulated for the kernel.
pub const MAX_KERNEL_DERIVATIVE: usize = 2;

const LAGRANGE_POINTS: usize = 6;

/// Radial tables of q = −p'/r and p'' on the profile's u-grid. Values are
/// stored multiplied by (1 + r)^{4+α} so the interpolated quantity stays
/// of order one.
#[derive(Debug, Clone)]
pub struct DerivativeTables {
    profile: Arc<KernelProfile>,
    q_scaled: Vec<f64>,
    p2_scaled: Vec<f64>,
    tail: TailSeries,
}

impl DerivativeTables {
    pub fn build(profile: Arc<KernelProfile>) -> Result<Arc<Self>> {
        let alpha = profile.alpha();
        let decay = 4.0 + alpha;
        let mut q_scaled = Vec::with_capacity(profile.radii().len());
        let mut p2_scaled = Vec::with_capacity(profile.radii().len());
        for &r in profile.radii() {
            let w = (1.0 + r).powf(decay);
            q_scaled.push(hankel::minus_dp_over_r(alpha, r)? * w);
            p2_scaled.push(hankel::second_radial(alpha, r)? * w);
        }
        Ok(Arc::new(Self {
            tail: TailSeries::new(alpha),
            profile,
            q_scaled,
            p2_scaled,
        }))
    }

    pub fn profile(&self) -> &KernelProfile {
        &self.profile
    }

    fn interpolate(&self, table: &[f64], r: f64) -> f64 {
        let h = self.profile.spacing();
        let u = r.ln_1p() / h;
        let n = table.len();
        let start = (u.floor() as isize - (LAGRANGE_POINTS as isize / 2 - 1))
            .clamp(0, (n - LAGRANGE_POINTS) as isize) as usize;
        let mut acc = 0.0;
        for j in start..start + LAGRANGE_POINTS {
            let mut l = 1.0;
            for k in start..start + LAGRANGE_POINTS {
                if k != j {
                    l *= (u - k as f64) / (j as f64 - k as f64);
                }
            }
            acc += l * table[j];
        }
        acc / (1.0 + r).powf(4.0 + self.profile.alpha())
    }

    /// (q(r), p''(r)) at unit time.
    pub fn radial(&self, r: f64) -> (f64, f64) {
        let r = r.abs();
        if r >= self.profile.r_max() {
            return (self.tail.minus_dp_over_r(r), self.tail.second_radial(r));
        }
        (self.interpolate(&self.q_scaled, r), self.interpolate(&self.p2_scaled, r))
    }
}

/// ∇^κ p(1, ·) for |κ| ≤ 2, assembled from the radial tables.
#[derive(Debug, Clone)]
pub struct KernelDerivativeProfile {
    kappa: MultiIndex,
    tables: Arc<DerivativeTables>,
}

/// Samples of ∇^κ p(1, ·) on a square patch with the pointwise ratio to p.
#[derive(Debug, Clone)]
pub struct DerivativePatch {
    pub points: Vec<[f64; 2]>,
    pub values: Vec<f64>,
    pub density: Vec<f64>,
}

impl DerivativePatch {
    /// sup |∇^κp| / p over the patch.
    pub fn domination_constant(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.density)
            .map(|(v, p)| v.abs() / p)
            .fold(0.0, f64::max)
    }
}

impl KernelDerivativeProfile {
    pub fn new(tables: Arc<DerivativeTables>, kappa: MultiIndex) -> Result<Self> {
        if kappa.order() > MAX_KERNEL_DERIVATIVE {
            return Err(Error::OrderTooHigh {
                order: kappa.order(),
                max: MAX_KERNEL_DERIVATIVE,
            });
        }
        Ok(Self { kappa, tables })
    }

    pub fn alpha(&self) -> f64 {
        self.tables.profile.alpha()
    }

    pub fn kappa(&self) -> MultiIndex {
        self.kappa
    }

    pub fn tables(&self) -> &Arc<DerivativeTables> {
        &self.tables
    }

    /// ∇^κ p(1, x).
    pub fn eval_unit(&self, x: [f64; 2]) -> f64 {
        let r = x[0].hypot(x[1]);
        if self.kappa.order() == 0 {
            return self.tables.profile.eval_radial(r);
        }
        let (q, p2) = self.tables.radial(r);
        let (c, s) = if r == 0.0 { (1.0, 0.0) } else { (x[0] / r, x[1] / r) };
        match (self.kappa.k1, self.kappa.k2) {
            (1, 0) => -q * x[0],
            (0, 1) => -q * x[1],
            (2, 0) => p2 * c * c - q * s * s,
            (0, 2) => p2 * s * s - q * c * c,
            (1, 1) => (p2 + q) * c * s,
            _ => unreachable!("order checked at construction"),
        }
    }

    /// Samples on [−w, w]² with m points per axis.
    pub fn patch(&self, half_width: f64, m: usize) -> DerivativePatch {
        let step = if m > 1 { 2.0 * half_width / (m - 1) as f64 } else { 0.0 };
        let mut out = DerivativePatch {
            points: Vec::with_capacity(m * m),
            values: Vec::with_capacity(m * m),
            density: Vec::with_capacity(m * m),
        };
        for j in 0..m {
            for i in 0..m {
                let x = [-half_width + i as f64 * step, -half_width + j as f64 * step];
                out.points.push(x);
                out.values.push(self.eval_unit(x));
                out.density.push(self.tables.profile.eval_unit(x));
            }
        }
        out
    }
}

/// p(t, x) = t^{−2/α} p(1, t^{−1/α} x).
pub fn kernel_eval(profile: &KernelProfile, t: f64, x: [f64; 2]) -> Result<f64> {
    check_range("t", t, t > 0.0 && t.is_finite(), "t > 0")?;
    let a = profile.alpha();
    let s = t.powf(-1.0 / a);
    Ok(t.powf(-2.0 / a) * profile.eval_unit([x[0] * s, x[1] * s]))
}

/// ∇^κ p(t, x) = t^{−(2+|κ|)/α} (∇^κ p)(1, t^{−1/α} x).
pub fn kernel_derivative_eval(dprofile: &KernelDerivativeProfile, t: f64, x: [f64; 2]) -> Result<f64> {
    check_range("t", t, t > 0.0 && t.is_finite(), "t > 0")?;
    let a = dprofile.alpha();
    let s = t.powf(-1.0 / a);
    let scale = t.powf(-(2.0 + dprofile.kappa.order() as f64) / a);
    Ok(scale * dprofile.eval_unit([x[0] * s, x[1] * s]))
}
