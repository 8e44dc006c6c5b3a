use crate::error::{check_range, Error, Result};
use crate::grid::{MultiIndex, RealField, Spectral};

/// Relative denominator floor: points with P_tθ0 < floor·max P_tθ0 are masked.
pub const DEFAULT_FLOOR: f64 = 1e-3;

/// Disc |x| ≤ radius plus a relative floor on the denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub radius: f64,
    pub floor: f64,
}

impl Window {
    pub fn new(radius: f64) -> Self {
        Self {
            radius,
            floor: DEFAULT_FLOOR,
        }
    }

    /// Largest admissible window, |x| ≤ L/4.
    pub fn quarter_box(length: f64) -> Self {
        Self::new(length / 4.0)
    }

    fn check(&self, length: f64) -> Result<()> {
        let limit = length / 4.0;
        if self.radius > limit * (1.0 + 1e-12) {
            return Err(Error::WindowTooLarge {
                radius: self.radius,
                limit,
            });
        }
        check_range("floor", self.floor, self.floor > 0.0 && self.floor < 1.0, "(0, 1)")
    }

    /// Flat indices of grid points inside the disc `lo ≤ |x| ≤ hi` whose
    /// denominator passes the floor.
    fn mask(&self, denom: &RealField, lo: f64, hi: f64) -> Vec<usize> {
        let grid = denom.grid();
        let cut = self.floor * denom.max();
        denom
            .values()
            .iter()
            .enumerate()
            .filter(|(idx, v)| {
                let [x1, x2] = grid.point(*idx);
                let r = x1.hypot(x2);
                r >= lo && r <= hi.min(self.radius) && **v >= cut && **v > 0.0
            })
            .map(|(idx, _)| idx)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioDiagnostic {
    pub t: f64,
    pub sup_ratio: f64,
    pub inf_ratio: f64,
    /// sup |θ/P_tθ0 − 1| over the masked window.
    pub sup_abs_dev: f64,
    pub points: usize,
}

impl RatioDiagnostic {
    pub fn is_finite_positive(&self) -> bool {
        self.sup_ratio.is_finite() && self.inf_ratio.is_finite() && self.inf_ratio > 0.0
    }

    pub fn spread(&self) -> f64 {
        self.sup_ratio / self.inf_ratio
    }
}

fn ratio_on(theta: &RealField, denom: &RealField, t: f64, idx: &[usize]) -> Result<RatioDiagnostic> {
    if idx.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let mut out = RatioDiagnostic {
        t,
        sup_ratio: f64::NEG_INFINITY,
        inf_ratio: f64::INFINITY,
        sup_abs_dev: 0.0,
        points: idx.len(),
    };
    for &i in idx {
        let r = theta.values()[i] / denom.values()[i];
        out.sup_ratio = out.sup_ratio.max(r);
        out.inf_ratio = out.inf_ratio.min(r);
        out.sup_abs_dev = out.sup_abs_dev.max((r - 1.0).abs());
    }
    Ok(out)
}

/// Statistics of θ(t)/P_tθ0 over the window.
pub fn ratio_diagnostics(theta_t: &RealField, p_t_theta0: &RealField, t: f64, window: Window) -> Result<RatioDiagnostic> {
    theta_t.check_same_grid(p_t_theta0)?;
    window.check(theta_t.grid().length())?;
    let idx = window.mask(p_t_theta0, 0.0, f64::INFINITY);
    ratio_on(theta_t, p_t_theta0, t, &idx)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    TToZero,
    TToInf,
    XToInf,
}

/// Deviation series of a limit scan together with its trend verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitScan {
    pub mode: ScanMode,
    /// Times for the t-scans, inner annulus radii for the x-scan.
    pub abscissa: Vec<f64>,
    pub deviation: Vec<f64>,
    /// Deviation at the extreme end of the scan.
    pub extreme: f64,
    pub extreme_is_min: bool,
    pub threshold: f64,
}

impl LimitScan {
    pub fn passed(&self) -> bool {
        self.extreme_is_min && self.extreme < self.threshold
    }

    /// Deviation is nonincreasing toward the extreme end.
    pub fn monotone(&self) -> bool {
        let d = &self.deviation;
        match self.mode {
            ScanMode::TToZero => d.windows(2).all(|w| w[0] <= w[1]),
            _ => d.windows(2).all(|w| w[1] <= w[0]),
        }
    }
}

/// One frame of a run: time, θ(t) and P_tθ0 on the same grid.
pub type Frame<'a> = (f64, &'a RealField, &'a RealField);

/// Scans sup|θ/P_tθ0 − 1| toward t → 0, t → ∞ or |x| → ∞.
///
/// The t-scans take one value per frame (frames sorted by t) and need at
/// least three frames spanning a decade. The x-scan splits the window into
/// `annuli` rings and takes, per ring, the supremum over all frames; a ring
/// masked out in every frame is an error.
pub fn limit_scan(frames: &[Frame<'_>], mode: ScanMode, window: Window, annuli: usize, threshold: f64) -> Result<LimitScan> {
    if frames.is_empty() {
        return Err(Error::InsufficientData("limit scan needs frames".into()));
    }
    let (abscissa, deviation) = match mode {
        ScanMode::TToZero | ScanMode::TToInf => {
            if frames.len() < 3 || frames[frames.len() - 1].0 < 10.0 * frames[0].0 {
                return Err(Error::InsufficientData("t-scan needs three frames spanning a decade".into()));
            }
            let mut dev = Vec::with_capacity(frames.len());
            for (t, th, p) in frames {
                dev.push(ratio_diagnostics(th, p, *t, window)?.sup_abs_dev);
            }
            (frames.iter().map(|f| f.0).collect::<Vec<_>>(), dev)
        }
        ScanMode::XToInf => {
            if annuli < 3 {
                return Err(Error::InsufficientData("x-scan needs three annuli".into()));
            }
            let dr = window.radius / annuli as f64;
            let mut dev: Vec<Option<f64>> = vec![None; annuli];
            for (t, th, p) in frames {
                th.check_same_grid(p)?;
                window.check(th.grid().length())?;
                for (k, d) in dev.iter_mut().enumerate() {
                    let idx = window.mask(p, k as f64 * dr, (k + 1) as f64 * dr);
                    // frames whose floor masks the whole ring do not contribute
                    if !idx.is_empty() {
                        let v = ratio_on(th, p, *t, &idx)?.sup_abs_dev;
                        *d = Some(d.map_or(v, |old| old.max(v)));
                    }
                }
            }
            let dev = dev.into_iter().collect::<Option<Vec<f64>>>().ok_or(Error::EmptyWindow)?;
            ((0..annuli).map(|k| k as f64 * dr).collect(), dev)
        }
    };
    let extreme = match mode {
        ScanMode::TToZero => deviation[0],
        _ => deviation[deviation.len() - 1],
    };
    let min = deviation.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(LimitScan {
        mode,
        abscissa,
        extreme_is_min: extreme <= min,
        extreme,
        deviation,
        threshold,
    })
}

/// sup over the window of t^{|κ|/α}|∇^κθ(t,x)| / P_t|θ0|(x).
pub fn gradient_bound_diag(
    spectral: &Spectral,
    theta_t: &RealField,
    p_t_abs_theta0: &RealField,
    kappa: MultiIndex,
    t: f64,
    alpha: f64,
    window: Window,
) -> Result<f64> {
    if kappa.order() > 2 {
        return Err(Error::OrderTooHigh {
            order: kappa.order(),
            max: 2,
        });
    }
    check_range("t", t, t > 0.0, "t > 0")?;
    theta_t.check_same_grid(p_t_abs_theta0)?;
    window.check(theta_t.grid().length())?;
    let d = spectral.apply_derivative(theta_t, kappa)?;
    let idx = window.mask(p_t_abs_theta0, 0.0, f64::INFINITY);
    if idx.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let scale = t.powf(kappa.order() as f64 / alpha);
    Ok(idx
        .iter()
        .map(|&i| scale * d.values()[i].abs() / p_t_abs_theta0.values()[i])
        .fold(0.0, f64::max))
}

/// Ratio diagnostics on every frame with t ≤ t_max, for data in L^p with
/// p above the critical exponent 2/(α−1).
pub fn above_critical_local_check(
    p_exp: f64,
    alpha: f64,
    t_max: f64,
    frames: &[Frame<'_>],
    window: Window,
) -> Result<Vec<RatioDiagnostic>> {
    let critical = 2.0 / (alpha - 1.0);
    check_range("p", p_exp, p_exp > critical, "p > 2/(α−1)")?;
    check_range("T", t_max, t_max > 0.0 && t_max.is_finite(), "0 < T < ∞")?;
    let out: Vec<RatioDiagnostic> = frames
        .iter()
        .filter(|f| f.0 > 0.0 && f.0 <= t_max)
        .map(|(t, th, p)| ratio_diagnostics(th, p, *t, window))
        .collect::<Result<_>>()?;
    if out.is_empty() {
        return Err(Error::InsufficientData("no frame in (0, T]".into()));
    }
    Ok(out)
}
