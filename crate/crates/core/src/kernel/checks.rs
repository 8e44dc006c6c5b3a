use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{check_range, Error, Result};
use crate::grid::{Axis, GridSpec, MultiIndex, RealField, Spectral};
use crate::special::gamma;

use super::derivative::kernel_eval;
use super::profile::{check_alpha_kernel, KernelProfile};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSidedBounds {
    pub c_low: f64,
    pub c_high: f64,
}

/// inf and sup of p(t, x)(t^{1/α} + |x|)^{2+α}/t over the product of the sets.
pub fn check_two_sided_estimate(profile: &KernelProfile, t_set: &[f64], x_set: &[[f64; 2]]) -> Result<TwoSidedBounds> {
    if t_set.is_empty() || x_set.is_empty() {
        return Err(Error::InsufficientData("two-sided sweep needs nonempty t and x sets".into()));
    }
    let a = profile.alpha();
    let mut out = TwoSidedBounds {
        c_low: f64::INFINITY,
        c_high: 0.0,
    };
    for &t in t_set {
        for &x in x_set {
            let r = x[0].hypot(x[1]);
            let ratio = kernel_eval(profile, t, x)? * (t.powf(1.0 / a) + r).powf(2.0 + a) / t;
            out.c_low = out.c_low.min(ratio);
            out.c_high = out.c_high.max(ratio);
        }
    }
    Ok(out)
}

/// ν(z) = α 2^{α−1} Γ(1+α/2) / (π Γ(1−α/2)) |z|^{−2−α}.
pub fn levy_density(alpha: f64, z: [f64; 2]) -> Result<f64> {
    check_range("alpha", alpha, alpha > 0.0 && alpha < 2.0, "alpha ∈ (0, 2)")?;
    let r = z[0].hypot(z[1]);
    check_range("|z|", r, r > 0.0, "z ≠ 0")?;
    let c = alpha * 2f64.powf(alpha - 1.0) * gamma(1.0 + alpha / 2.0) / (PI * gamma(1.0 - alpha / 2.0));
    Ok(c * r.powf(-2.0 - alpha))
}

/// Samples a torus Fourier multiplier applied to the Dirac mass at the
/// origin, i.e. the periodized kernel with symbol `symbol(ξ1, ξ2)`.
pub fn torus_kernel(spectral: &Spectral, symbol: impl Fn(usize) -> Complex64) -> Result<RealField> {
    let grid = *spectral.grid();
    let dx = grid.dx();
    let mut delta = vec![0.0; grid.len()];
    delta[grid.origin_index()] = 1.0 / (dx * dx);
    let spec = spectral.forward(&RealField::new(grid, delta)?)?;
    Ok(spectral.inverse(&spectral.apply_symbol(&spec, symbol)))
}

/// ∇^κ p(t, ·) on the torus.
pub fn torus_kernel_derivative(spectral: &Spectral, alpha: f64, t: f64, kappa: MultiIndex) -> Result<RealField> {
    check_range("t", t, t > 0.0, "t > 0")?;
    torus_kernel(spectral, |idx| {
        spectral.derivative_symbol(idx, kappa) * (-t * spectral.abs_xi(idx).powf(alpha)).exp()
    })
}

/// R_i ∇^κ p(t, ·) on the torus.
pub fn torus_riesz_kernel(spectral: &Spectral, alpha: f64, t: f64, kappa: MultiIndex, axis: Axis) -> Result<RealField> {
    check_range("t", t, t > 0.0, "t > 0")?;
    torus_kernel(spectral, |idx| {
        spectral.riesz_symbol(idx, axis)
            * spectral.derivative_symbol(idx, kappa)
            * (-t * spectral.abs_xi(idx).powf(alpha)).exp()
    })
}

/// sup over the window |x| ≤ window_radius and t ∈ t_set of
/// |R_i∇^κ p(t, x)|·t^{|κ|/α}(t^{1/α} + |x|)², both components, computed on
/// the torus `grid`.
pub fn riesz_kernel_bound_check(
    alpha: f64,
    kappa: MultiIndex,
    t_set: &[f64],
    grid: GridSpec,
    window_radius: f64,
) -> Result<f64> {
    check_alpha_kernel(alpha)?;
    if kappa.order() > 1 {
        return Err(Error::OrderTooHigh {
            order: kappa.order(),
            max: 1,
        });
    }
    let limit = grid.length() / 4.0;
    if window_radius > limit {
        return Err(Error::WindowTooLarge {
            radius: window_radius,
            limit,
        });
    }
    if t_set.is_empty() {
        return Err(Error::InsufficientData("empty t set".into()));
    }
    let sp = Spectral::new(grid);
    let mut sup = 0.0f64;
    for &t in t_set {
        let scale = t.powf(1.0 / alpha);
        if scale > grid.length() / 8.0 {
            return Err(Error::WindowTooLarge {
                radius: scale,
                limit: grid.length() / 8.0,
            });
        }
        for axis in [Axis::X1, Axis::X2] {
            let k = torus_riesz_kernel(&sp, alpha, t, kappa, axis)?;
            for (idx, v) in k.values().iter().enumerate() {
                let [x1, x2] = grid.point(idx);
                let r = x1.hypot(x2);
                if r <= window_radius {
                    let w = t.powf(kappa.order() as f64 / alpha) * (scale + r).powi(2);
                    sup = sup.max(v.abs() * w);
                }
            }
        }
    }
    Ok(sup)
}

/// P_tθ0(x) = Σ_j p(t, x − y_j) θ0(y_j) dx² over the samples of θ0, which
/// must vanish (below 1e−12 of the maximum) on the two outermost rings of
/// the sampling box.
pub fn convolve_whole_space(profile: &KernelProfile, theta0: &RealField, t: f64, x_set: &[[f64; 2]]) -> Result<Vec<f64>> {
    check_range("t", t, t > 0.0 && t.is_finite(), "t > 0")?;
    let grid = theta0.grid();
    let n = grid.n();
    let floor = 1e-12 * theta0.max_abs();
    for j2 in 0..n {
        for j1 in 0..n {
            let edge = j1.min(j2).min(n - 1 - j1).min(n - 1 - j2) < 2;
            if edge && theta0.at(j1, j2).abs() > floor {
                return Err(Error::SupportNotContained);
            }
        }
    }
    let dx2 = grid.dx() * grid.dx();
    let support: Vec<([f64; 2], f64)> = theta0
        .values()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.abs() > floor)
        .map(|(idx, v)| (grid.point(idx), *v))
        .collect();
    x_set
        .iter()
        .map(|x| {
            let mut acc = 0.0;
            for (y, v) in &support {
                acc += kernel_eval(profile, t, [x[0] - y[0], x[1] - y[1]])? * v;
            }
            Ok(acc * dx2)
        })
        .collect()
}

/// inf over t ∈ [t1, t2] (nt log-spaced times) and x ∈ x_set of
/// P_t|θ0|(x)(1 + |x|)^{2+α}.
pub fn lower_bound_check(
    profile: &KernelProfile,
    theta0: &RealField,
    t1: f64,
    t2: f64,
    x_set: &[[f64; 2]],
    nt: usize,
) -> Result<f64> {
    check_range("t1", t1, t1 > 0.0 && t1 < t2, "0 < t1 < t2")?;
    if theta0.max_abs() == 0.0 {
        return Err(Error::InsufficientData("θ0 is identically zero".into()));
    }
    let abs = theta0.abs();
    let a = profile.alpha();
    let nt = nt.max(2);
    let mut inf = f64::INFINITY;
    for k in 0..nt {
        let t = t1 * (t2 / t1).powf(k as f64 / (nt - 1) as f64);
        let vals = convolve_whole_space(profile, &abs, t, x_set)?;
        for (v, x) in vals.iter().zip(x_set) {
            inf = inf.min(v * (1.0 + x[0].hypot(x[1])).powf(2.0 + a));
        }
    }
    Ok(inf)
}
