use crate::error::{check_range, Result};
use crate::grid::{GridSpec, RealField};

/// A·exp(−x1²/w1² − x2²/w2²).
pub fn gaussian(grid: GridSpec, amplitude: f64, widths: [f64; 2]) -> Result<RealField> {
    check_range("width", widths[0].min(widths[1]), widths[0] > 0.0 && widths[1] > 0.0, "widths > 0")?;
    let [a, b] = widths;
    Ok(grid.sample(|x, y| amplitude * (-(x * x) / (a * a) - (y * y) / (b * b)).exp()))
}

/// Smooth bump A·exp(1 − 1/(1 − |x|²/R²)) supported in |x| < R, peak A.
pub fn compact_bump(grid: GridSpec, amplitude: f64, radius: f64) -> Result<RealField> {
    check_range("radius", radius, radius > 0.0, "radius > 0")?;
    Ok(grid.sample(|x, y| {
        let s = (x * x + y * y) / (radius * radius);
        if s < 1.0 {
            amplitude * (1.0 - 1.0 / (1.0 - s)).exp()
        } else {
            0.0
        }
    }))
}

/// A(1 + |x|²/s²)^{−γ/2}. In L^{2/(α−1)}(R²) exactly when γ > α − 1.
pub fn power_tail(grid: GridSpec, amplitude: f64, gamma: f64, scale: f64, alpha: f64) -> Result<RealField> {
    check_range("gamma", gamma, gamma > alpha - 1.0, "gamma > alpha − 1")?;
    check_range("scale", scale, scale > 0.0, "scale > 0")?;
    Ok(grid.sample(|x, y| amplitude * (1.0 + (x * x + y * y) / (scale * scale)).powf(-0.5 * gamma)))
}
