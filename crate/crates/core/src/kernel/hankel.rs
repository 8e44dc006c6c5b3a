//! Hankel-transform integrals of the radial symbol e^{−s^α}.
//!
//! Every radial quantity of the unit-time kernel is a one-dimensional
//! integral ∫_0^S e^{−s^α} s^n J_ν(sr) ds. The range is cut at consecutive
//! Bessel zeros (McMahon's approximation is accurate enough for
//! breakpoints) and each piece goes to the adaptive Gauss rule; truncating
//! at S where the integrand is below 1e−18 of its scale keeps the number of
//! pieces finite, so no series acceleration is needed.

use std::f64::consts::PI;

use crate::error::Result;
use crate::special::{adaptive, gamma, AdaptiveOptions, Neumaier};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Bessel {
    J0,
    J1,
}


/// Truncation point S with e^{−S^α} S^n ≤ 1e−18.
pub(crate) fn upper_limit(alpha: f64, power: i32) -> f64 {
    let mut s = 41.5f64.powf(1.0 / alpha);
    for _ in 0..50 {
        s = (41.5 + power as f64 * s.max(1.0).ln()).powf(1.0 / alpha);
    }
    s
}

/// k-th positive zero (k ≥ 1) of J0 or J1, McMahon's first-order form.
fn bessel_zero(kind: Bessel, k: usize) -> f64 {
    let k = k as f64;
    match kind {
        Bessel::J0 => {
            let b = (k - 0.25) * PI;
            b + 1.0 / (8.0 * b)
        }
        Bessel::J1 => {
            let b = (k + 0.25) * PI;
            b - 3.0 / (8.0 * b)
        }
    }
}

/// ∫_0^∞ e^{−s^α} s^n J_ν(sr) ds with J1 optionally divided by its argument
/// (`j1_over_arg`), in which case the integrand is e^{−s^α} s^n J1(sr)/(sr).
pub(crate) fn hankel(alpha: f64, n: i32, kind: Bessel, j1_over_arg: bool, r: f64) -> Result<f64> {
    let bessel = move |x: f64| -> f64 {
        match kind {
            Bessel::J0 => libm::j0(x),
            Bessel::J1 if j1_over_arg => {
                if x.abs() < 1e-6 {
                    0.5 - x * x / 16.0
                } else {
                    libm::j1(x) / x
                }
            }
            Bessel::J1 => libm::j1(x),
        }
    };
    let integrand = move |s: f64| -> f64 {
        if s <= 0.0 {
            return if n == 0 && kind == Bessel::J0 { 1.0 } else { 0.0 };
        }
        (-s.powf(alpha)).exp() * s.powi(n) * bessel(s * r)
    };
    let s_max = upper_limit(alpha, n + 1);
    // Pieces far out are negligible against the integrand's overall scale.
    let opts = AdaptiveOptions {
        rel: 1e-14,
        abs: 1e-18 * radial_moment(alpha, n),
        max_panels: 2000,
        order: 10,
    };
    if r * s_max <= 2.0 * PI {
        return adaptive(0.0, s_max, opts, integrand);
    }
    let mut acc = Neumaier::default();
    let mut lo = 0.0;
    let mut k = 1;
    loop {
        let hi = (bessel_zero(kind, k) / r).min(s_max);
        acc.add(adaptive(lo, hi, opts, integrand)?);
        if hi >= s_max {
            break;
        }
        lo = hi;
        k += 1;
    }
    Ok(acc.sum())
}

/// ∫_0^∞ e^{−s^α} s^n ds = Γ((n+1)/α)/α.
pub(crate) fn radial_moment(alpha: f64, n: i32) -> f64 {
    gamma((n as f64 + 1.0) / alpha) / alpha
}

/// p(1, r) = (2π)^{−1} ∫ e^{−s^α} J0(sr) s ds.
pub(crate) fn density(alpha: f64, r: f64) -> Result<f64> {
    if r == 0.0 {
        return Ok(radial_moment(alpha, 1) / (2.0 * PI));
    }
    Ok(hankel(alpha, 1, Bessel::J0, false, r)? / (2.0 * PI))
}

/// q(r) = −p'(r)/r = (2π)^{−1} ∫ e^{−s^α} s³ J1(sr)/(sr) ds.
pub(crate) fn minus_dp_over_r(alpha: f64, r: f64) -> Result<f64> {
    if r == 0.0 {
        return Ok(radial_moment(alpha, 3) / (4.0 * PI));
    }
    Ok(hankel(alpha, 3, Bessel::J1, true, r)? / (2.0 * PI))
}

/// p''(r) = −(2π)^{−1} ∫ e^{−s^α} s³ J0(sr) ds + q(r).
pub(crate) fn second_radial(alpha: f64, r: f64) -> Result<f64> {
    let q = minus_dp_over_r(alpha, r)?;
    let m = if r == 0.0 {
        radial_moment(alpha, 3)
    } else {
        hankel(alpha, 3, Bessel::J0, false, r)?
    };
    Ok(-m / (2.0 * PI) + q)
}
