use crate::error::{check_range, Error, Result};
use crate::grid::{lp_norm, GridSpec, MultiIndex, Spectral};
use crate::kernel::torus_kernel_derivative;
use crate::solver::DiagnosticRecord;

/// Columns of the diagnostic series that can be fitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    L2,
    Lcrit,
    Linf,
    RieszLinf,
}

impl Quantity {
    pub fn name(&self) -> &'static str {
        match self {
            Quantity::L2 => "l2",
            Quantity::Lcrit => "lcrit",
            Quantity::Linf => "linf",
            Quantity::RieszLinf => "riesz_linf",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "l2" => Some(Quantity::L2),
            "lcrit" => Some(Quantity::Lcrit),
            "linf" => Some(Quantity::Linf),
            "riesz_linf" => Some(Quantity::RieszLinf),
            _ => None,
        }
    }

    fn value(&self, r: &DiagnosticRecord) -> f64 {
        match self {
            Quantity::L2 => r.l2,
            Quantity::Lcrit => r.lcrit,
            Quantity::Linf => r.linf,
            Quantity::RieszLinf => r.riesz_linf,
        }
    }

    /// Exponent of the Lebesgue norm the column measures.
    fn lebesgue(&self, alpha: f64) -> f64 {
        match self {
            Quantity::L2 => 2.0,
            Quantity::Lcrit => 2.0 / (alpha - 1.0),
            Quantity::Linf | Quantity::RieszLinf => f64::INFINITY,
        }
    }
}

/// −(α−1)/α + 2/(αp): decay rate of ‖θ(t)‖_p for critical data.
pub fn expected_decay_slope(alpha: f64, p: f64) -> f64 {
    -(alpha - 1.0) / alpha + 2.0 / (alpha * p)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub quantity: String,
    pub t_a: f64,
    pub t_b: f64,
    pub slope: f64,
    pub slope_stderr: f64,
    pub expected: f64,
    pub tol: f64,
    pub points: usize,
}

impl SlopeFit {
    pub fn passed(&self) -> bool {
        (self.slope - self.expected).abs() <= self.tol
    }
}

/// Unweighted least squares of log v against log t: (slope, stderr).
pub fn fit_power_law(ts: &[f64], vs: &[f64]) -> Result<(f64, f64)> {
    if ts.len() != vs.len() || ts.len() < 3 {
        return Err(Error::InsufficientData("power-law fit needs three matched points".into()));
    }
    if ts.iter().chain(vs).any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::InsufficientData("power-law fit needs positive finite data".into()));
    }
    let x: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let y: Vec<f64> = vs.iter().map(|v| v.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let ssr: f64 = x.iter().zip(&y).map(|(a, b)| (b - my - slope * (a - mx)).powi(2)).sum();
    Ok((slope, (ssr / (n - 2.0) / sxx).sqrt()))
}

fn check_span(ts: &[f64]) -> Result<()> {
    let (lo, hi) = (ts[0], ts[ts.len() - 1]);
    if ts.len() < 8 || (hi / lo).log10() < 1.5 {
        return Err(Error::InsufficientData(format!(
            "slope fit needs at least 8 points over 1.5 decades, got {} over [{lo}, {hi}]",
            ts.len()
        )));
    }
    Ok(())
}

/// Late-time slope of one diagnostic column over [t_a, t_b].
///
/// Records are thinned to at most 40 log-spaced samples so that the dense
/// late-time steps do not dominate the fit. The expected exponent is the
/// critical-data decay rate of the column's norm.
pub fn decay_slope_fit(
    records: &[DiagnosticRecord],
    quantity: Quantity,
    alpha: f64,
    t_a: f64,
    t_b: f64,
    tol: f64,
) -> Result<SlopeFit> {
    check_range("t_a", t_a, t_a > 0.0 && t_a < t_b, "0 < t_a < t_b")?;
    let inside: Vec<&DiagnosticRecord> = records.iter().filter(|r| r.time >= t_a && r.time <= t_b).collect();
    if inside.is_empty() {
        return Err(Error::InsufficientData("no records in the fit range".into()));
    }
    let samples = 40;
    let mut picked: Vec<usize> = (0..samples)
        .map(|k| {
            let target = t_a * (t_b / t_a).powf(k as f64 / (samples - 1) as f64);
            (0..inside.len())
                .min_by(|&i, &j| {
                    let di = (inside[i].time.ln() - target.ln()).abs();
                    let dj = (inside[j].time.ln() - target.ln()).abs();
                    di.total_cmp(&dj)
                })
                .expect("nonempty")
        })
        .collect();
    picked.dedup();
    let ts: Vec<f64> = picked.iter().map(|&i| inside[i].time).collect();
    let vs: Vec<f64> = picked.iter().map(|&i| quantity.value(inside[i])).collect();
    check_span(&ts)?;
    let (slope, stderr) = fit_power_law(&ts, &vs)?;
    Ok(SlopeFit {
        quantity: quantity.name().into(),
        t_a: ts[0],
        t_b: ts[ts.len() - 1],
        slope,
        slope_stderr: stderr,
        expected: expected_decay_slope(alpha, quantity.lebesgue(alpha)),
        tol,
        points: ts.len(),
    })
}

/// Slope of t ↦ ‖∇^κ p(t,·)‖_p from torus kernels, against
/// −(2/α)(1 − 1/p) − |κ|/α. Every t must satisfy 3dx ≤ t^{1/α} ≤ L/8.
pub fn kernel_lp_slope_fit(alpha: f64, kappa: MultiIndex, p: f64, grid: GridSpec, ts: &[f64], tol: f64) -> Result<SlopeFit> {
    check_range("p", p, p >= 1.0, "p >= 1")?;
    if ts.is_empty() {
        return Err(Error::InsufficientData("empty t set".into()));
    }
    check_span(ts)?;
    let sp = Spectral::new(grid);
    let mut vs = Vec::with_capacity(ts.len());
    for &t in ts {
        let scale = t.powf(1.0 / alpha);
        if scale > grid.length() / 8.0 {
            return Err(Error::WindowTooLarge {
                radius: scale,
                limit: grid.length() / 8.0,
            });
        }
        check_range("t^{1/α}", scale, scale >= 3.0 * grid.dx(), "at least three grid spacings")?;
        vs.push(lp_norm(&torus_kernel_derivative(&sp, alpha, t, kappa)?, p)?);
    }
    let (slope, stderr) = fit_power_law(ts, &vs)?;
    let inv_p = if p.is_infinite() { 0.0 } else { 1.0 / p };
    Ok(SlopeFit {
        quantity: format!("kernel d{kappa} L^{p}"),
        t_a: ts[0],
        t_b: ts[ts.len() - 1],
        slope,
        slope_stderr: stderr,
        expected: -(2.0 / alpha) * (1.0 - inv_p) - kappa.order() as f64 / alpha,
        tol,
        points: ts.len(),
    })
}

/// t^{(α−1)/α}‖R⊥θ(t)‖_∞ at the first and last positive time and its peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RieszLimit {
    pub first: f64,
    pub last: f64,
    pub peak: f64,
}

impl RieszLimit {
    /// Both ends of the scan sit below the interior peak (by more than roundoff).
    pub fn passed(&self) -> bool {
        let cut = self.peak * (1.0 - 1e-9);
        self.first < cut && self.last < cut
    }
}

pub fn riesz_limit_check(records: &[DiagnosticRecord], alpha: f64) -> Result<RieszLimit> {
    let scaled: Vec<f64> = records
        .iter()
        .filter(|r| r.time > 0.0)
        .map(|r| r.time.powf((alpha - 1.0) / alpha) * r.riesz_linf)
        .collect();
    if scaled.len() < 3 {
        return Err(Error::InsufficientData("Riesz limit scan needs three records".into()));
    }
    Ok(RieszLimit {
        first: scaled[0],
        last: scaled[scaled.len() - 1],
        peak: scaled.iter().copied().fold(0.0, f64::max),
    })
}
