//! The two-sided singular integral I(v), the inner constant c_γ and the
//! weighted time-convolution operator T_γ.

use crate::error::{check_range, Result};
use crate::grid::{RealField, Spectral};

use super::gamma::beta;
use super::quadrature::AdaptiveOptions;
use super::timegrid::{singular_integral, TimeGrid};

fn opts() -> AdaptiveOptions {
    AdaptiveOptions {
        rel: 1e-12,
        abs: 1e-300,
        max_panels: 4000,
        order: 10,
    }
}

fn check_alpha_open(alpha: f64) -> Result<()> {
    check_range("alpha", alpha, alpha > 1.0 && alpha < 2.0, "alpha ∈ (1, 2)")
}

/// (x^α − y^α)/(x − y) for x = y + d, computed without cancellation.
fn power_secant(alpha: f64, y: f64, d: f64) -> f64 {
    if d == 0.0 {
        alpha * y.powf(alpha - 1.0)
    } else {
        y.powf(alpha) * (alpha * (d / y).ln_1p()).exp_m1() / d
    }
}

/// I(v) = ∫_v^1 r^{−β}(1−r^α)^{−1/α}(r^α−v^α)^{−1/α} dr together with the
/// ratio I(v)/(v^{−β}(1−v)^{1−2/α}).
pub fn lemma_tech_integral(alpha: f64, beta_param: f64, v: f64) -> Result<(f64, f64)> {
    check_alpha_open(alpha)?;
    check_range("beta", beta_param, beta_param > 0.0, "beta > 0")?;
    check_range("v", v, v > 0.0 && v < 1.0, "v ∈ (0, 1)")?;
    let e = 1.0 / alpha;
    let i = singular_integral(v, 1.0, e, e, opts(), |r, dl, dr| {
        let upper = power_secant(alpha, 1.0 - dr, dr);
        let lower = power_secant(alpha, v, dl);
        r.powf(-beta_param) * upper.powf(-e) * lower.powf(-e)
    })?;
    let scale = v.powf(-beta_param) * (1.0 - v).powf(1.0 - 2.0 / alpha);
    Ok((i, i / scale))
}

/// Logistic sweep of (0, 1) with `count` points clustered at both ends.
pub fn default_v_sweep(count: usize) -> Vec<f64> {
    let count = count.max(2);
    (0..count)
        .map(|k| {
            let z = -13.0 + 26.0 * k as f64 / (count - 1) as f64;
            1.0 / (1.0 + (-z).exp())
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct RatioSweep {
    pub v: Vec<f64>,
    pub ratio: Vec<f64>,
    pub min: f64,
    pub max: f64,
}

impl RatioSweep {
    fn from_pairs(v: Vec<f64>, ratio: Vec<f64>) -> Self {
        let min = ratio.iter().copied().fold(f64::INFINITY, f64::min);
        let max = ratio.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self { v, ratio, min, max }
    }
}

/// Two-sided ratio of I(v) over a v-sweep.
pub fn lemma_tech_sweep(alpha: f64, beta_param: f64, vs: &[f64]) -> Result<RatioSweep> {
    let ratio = vs
        .iter()
        .map(|&v| lemma_tech_integral(alpha, beta_param, v).map(|r| r.1))
        .collect::<Result<Vec<_>>>()?;
    Ok(RatioSweep::from_pairs(vs.to_vec(), ratio))
}

/// One-sided ratio I(v)/(v^{−β}(1−v)^{−1/α}) over a sweep; its max is C_β.
pub fn corollary_sweep(alpha: f64, beta_param: f64, vs: &[f64]) -> Result<RatioSweep> {
    let ratio = vs
        .iter()
        .map(|&v| {
            let (i, _) = lemma_tech_integral(alpha, beta_param, v)?;
            Ok(i / (v.powf(-beta_param) * (1.0 - v).powf(-1.0 / alpha)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RatioSweep::from_pairs(vs.to_vec(), ratio))
}

fn check_gamma(alpha: f64, gamma: f64) -> Result<()> {
    check_alpha_open(alpha)?;
    check_range("gamma", gamma, gamma > 0.0 && gamma < 1.0 / alpha, "gamma ∈ (0, 1/alpha)")
}

/// J(v) = ∫_v^1 σ^{−γ−(α−1)/α}((1−σ)(σ−v))^{−1/α} dσ, the rescaled inner
/// integral of the iterated T_γ bound.
pub fn inner_integral(alpha: f64, gamma: f64, v: f64) -> Result<f64> {
    check_gamma(alpha, gamma)?;
    check_range("v", v, v > 0.0 && v < 1.0, "v ∈ (0, 1)")?;
    let e = 1.0 / alpha;
    let p = gamma + (alpha - 1.0) / alpha;
    singular_integral(v, 1.0, e, e, opts(), |s, _, _| s.powf(-p))
}

/// J(v) through the substitution σ = r^α, which gives α·I_{β=γα}(v^{1/α}).
pub fn inner_integral_via_lemma(alpha: f64, gamma: f64, v: f64) -> Result<f64> {
    check_gamma(alpha, gamma)?;
    let (i, _) = lemma_tech_integral(alpha, gamma * alpha, v.powf(1.0 / alpha))?;
    Ok(alpha * i)
}

#[derive(Debug, Clone, Copy)]
pub struct TGammaConstants {
    /// sup_v J(v)/(v^{−γ}(1−v)^{−1/α}) from the direct integral.
    pub c_gamma: f64,
    /// The same supremum through the substituted integral.
    pub c_gamma_via_lemma: f64,
    /// B(1−γ−(α−1)/α, 1−1/α).
    pub beta_factor: f64,
    /// 1/c_γ: the smallness threshold on η.
    pub eta_threshold: f64,
}

pub fn t_gamma_constants(alpha: f64, gamma: f64, vs: &[f64]) -> Result<TGammaConstants> {
    check_gamma(alpha, gamma)?;
    let mut direct = 0.0f64;
    let mut via = 0.0f64;
    for &v in vs {
        let w = v.powf(-gamma) * (1.0 - v).powf(-1.0 / alpha);
        direct = direct.max(inner_integral(alpha, gamma, v)? / w);
        via = via.max(inner_integral_via_lemma(alpha, gamma, v)? / w);
    }
    Ok(TGammaConstants {
        c_gamma: direct,
        c_gamma_via_lemma: via,
        beta_factor: beta(1.0 - gamma - (alpha - 1.0) / alpha, 1.0 - 1.0 / alpha)?,
        eta_threshold: 1.0 / direct,
    })
}

/// A positive Markov semigroup acting on sampled fields.
pub trait Semigroup {
    fn alpha(&self) -> f64;
    fn apply(&self, f: &RealField, t: f64) -> Result<RealField>;
}

/// The periodized stable semigroup, applied spectrally.
#[derive(Debug, Clone)]
pub struct TorusSemigroup {
    spectral: Spectral,
    alpha: f64,
}

impl TorusSemigroup {
    pub fn new(spectral: Spectral, alpha: f64) -> Result<Self> {
        check_range("alpha", alpha, alpha > 0.0 && alpha <= 2.0, "alpha ∈ (0, 2]")?;
        Ok(Self { spectral, alpha })
    }
}

impl Semigroup for TorusSemigroup {
    fn alpha(&self) -> f64 {
        self.alpha
    }

    fn apply(&self, f: &RealField, t: f64) -> Result<RealField> {
        self.spectral.apply_semigroup(f, t, self.alpha)
    }
}

#[derive(Debug, Clone)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub fields: Vec<RealField>,
}

/// T_γ f(t) = t^γ ∫_0^t s^{−γ−(α−1)/α}(t−s)^{−1/α} P_{t−s}|f(s)| ds at each
/// requested time. `f` is sampled at the `nodes` points of the Gauss–Jacobi
/// product grid on [0, t].
pub fn apply_t_gamma(
    mut f: impl FnMut(f64) -> Result<RealField>,
    times: &[f64],
    gamma: f64,
    semigroup: &dyn Semigroup,
    nodes: usize,
) -> Result<TimeSeries> {
    let alpha = semigroup.alpha();
    check_gamma(alpha, gamma)?;
    let b = gamma + (alpha - 1.0) / alpha;
    let mut fields = Vec::with_capacity(times.len());
    for &t in times {
        check_range("t", t, t > 0.0 && t.is_finite(), "t > 0")?;
        let grid = TimeGrid::jacobi(0.0, t, 1.0 / alpha, b, nodes)?;
        let mut acc: Option<RealField> = None;
        for i in 0..grid.len() {
            let fs = f(grid.nodes()[i])?.abs();
            let term = semigroup.apply(&fs, grid.dist_right()[i])?.scale(grid.weights()[i]);
            acc = Some(match acc {
                None => term,
                Some(a) => a.zip_with(&term, |x, y| x + y)?,
            });
        }
        let total = acc.expect("time grid has nodes");
        fields.push(total.scale(t.powf(gamma)));
    }
    Ok(TimeSeries {
        times: times.to_vec(),
        fields,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::special::timegrid::DEFAULT_JACOBI_NODES;

    /// Double-exponential quadrature on (lo, hi); handles integrable endpoint
    /// singularities without any substitution. `f` receives the distances to
    /// both endpoints.
    fn tanh_sinh(lo: f64, hi: f64, f: impl Fn(f64, f64) -> f64) -> f64 {
        let h = 1.0f64 / 128.0;
        let half = 0.5 * (hi - lo);
        let mut sum = 0.0;
        for k in -768i32..=768 {
            let x = k as f64 * h;
            let s = std::f64::consts::FRAC_PI_2 * x.sinh();
            let w = std::f64::consts::FRAC_PI_2 * x.cosh() / s.cosh().powi(2);
            // distance from the nearer endpoint, in [0, half]
            let d = half * 2.0 / ((2.0 * s.abs()).exp() + 1.0);
            if d > 0.0 {
                let (dl, dr) = if s < 0.0 { (d, 2.0 * half - d) } else { (2.0 * half - d, d) };
                sum += w * f(dl, dr);
            }
        }
        sum * h * half
    }

    fn brute_i(alpha: f64, beta: f64, v: f64) -> f64 {
        tanh_sinh(v, 1.0, |dl, dr| {
            let r = v + dl;
            let upper = -(alpha * (-dr).ln_1p()).exp_m1();
            let lower = v.powf(alpha) * (alpha * (dl / v).ln_1p()).exp_m1();
            r.powf(-beta) * (upper * lower).powf(-1.0 / alpha)
        })
    }

    #[test]
    fn lemma_integral_matches_independent_quadrature() {
        for &v in &[0.01, 0.1, 0.5, 0.9, 0.99] {
            let (i, _) = lemma_tech_integral(1.5, 1.0, v).unwrap();
            let b = brute_i(1.5, 1.0, v);
            assert!((i / b - 1.0).abs() < 1e-6, "v = {v}: {i} vs {b}");
        }
    }

    #[test]
    fn lemma_ratio_is_two_sided_and_stable_under_refinement() {
        let coarse = lemma_tech_sweep(1.5, 1.0, &default_v_sweep(27)).unwrap();
        let fine = lemma_tech_sweep(1.5, 1.0, &default_v_sweep(105)).unwrap();
        assert!(coarse.min > 0.0 && coarse.max.is_finite());
        assert!((fine.min / coarse.min - 1.0).abs() < 0.05);
        assert!((fine.max / coarse.max - 1.0).abs() < 0.05);
        let cor = corollary_sweep(1.5, 1.0, &default_v_sweep(27)).unwrap();
        assert!(cor.max.is_finite() && cor.max > 0.0);
    }

    #[test]
    fn v_outside_unit_interval_is_rejected() {
        assert!(lemma_tech_integral(1.5, 1.0, 0.0).is_err());
        assert!(lemma_tech_integral(1.5, 1.0, 1.0).is_err());
        assert!(lemma_tech_integral(1.5, -1.0, 0.5).is_err());
    }

    #[test]
    fn inner_integral_two_routes_agree() {
        for &(alpha, gamma) in &[(1.5, 0.3), (1.2, 0.5), (1.8, 0.2)] {
            for &v in &[1e-4, 0.05, 0.5, 0.97] {
                let a = inner_integral(alpha, gamma, v).unwrap();
                let b = inner_integral_via_lemma(alpha, gamma, v).unwrap();
                assert!((a / b - 1.0).abs() < 1e-9, "alpha={alpha} gamma={gamma} v={v}");
            }
        }
        let c = t_gamma_constants(1.5, 0.3, &default_v_sweep(41)).unwrap();
        assert!((c.c_gamma / c.c_gamma_via_lemma - 1.0).abs() < 1e-9);
        assert!(c.eta_threshold > 0.0);
        assert!(t_gamma_constants(1.5, 0.7, &[0.5]).is_err());
    }

    fn bump(grid: GridSpec) -> RealField {
        grid.sample(|x, y| (-(x * x + 2.0 * y * y)).exp() - 0.3 * (-((x - 1.0).powi(2) + y * y) * 3.0).exp())
    }

    #[test]
    fn t_gamma_of_semigroup_orbit_is_beta_multiple() {
        let grid = GridSpec::new(64, 20.0).unwrap();
        let sg = TorusSemigroup::new(Spectral::new(grid), 1.5).unwrap();
        let theta = bump(grid).abs();
        let gamma = 0.3;
        let out = apply_t_gamma(|s| sg.apply(&theta, s), &[0.5, 2.0], gamma, &sg, DEFAULT_JACOBI_NODES).unwrap();
        let bfac = beta(1.0 - gamma - 1.0 / 3.0, 1.0 - 1.0 / 1.5).unwrap();
        for (t, field) in out.times.iter().zip(&out.fields) {
            let pt = sg.apply(&theta, *t).unwrap();
            let scale = pt.max_abs();
            for (a, b) in field.values().iter().zip(pt.values()) {
                assert!((a - bfac * b).abs() <= 1e-3 * bfac * scale);
            }
            assert!(field.min() >= -1e-10 * field.max());
        }
    }

    #[test]
    fn t_gamma_zero_and_monotone() {
        let grid = GridSpec::new(32, 10.0).unwrap();
        let sg = TorusSemigroup::new(Spectral::new(grid), 1.5).unwrap();
        let res = 12;
        let zero = apply_t_gamma(|_| Ok(RealField::zeros(grid)), &[1.0], 0.2, &sg, res).unwrap();
        assert_eq!(zero.fields[0].max_abs(), 0.0);
        let small = grid.sample(|x, y| (-(x * x + y * y)).exp());
        let big = small.map(|v| v + 0.1 * (1.0 + v));
        let fs = apply_t_gamma(|s| Ok(small.scale(1.0 + s)), &[1.0], 0.2, &sg, res).unwrap();
        let gs = apply_t_gamma(|s| Ok(big.scale(1.0 + s)), &[1.0], 0.2, &sg, res).unwrap();
        for (a, b) in fs.fields[0].values().iter().zip(gs.fields[0].values()) {
            assert!(a <= b);
        }
    }
}
