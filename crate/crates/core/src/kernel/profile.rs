use std::f64::consts::PI;

use crate::error::{check_range, Error, Result};
use crate::special::{first_derivative_weights, gauss_legendre, Neumaier};

use super::hankel;
use super::tail::TailSeries;

const MAGIC: &[u8; 4] = b"SKPF";
const VERSION: u32 = 1;
const STENCIL: usize = 7;

/// Radial table of the unit-time density p(1, r).
///
/// Nodes are uniform in u = ln(1 + r). Between nodes ln p is a cubic
/// Hermite polynomial in u whose slopes come from sixth-order differences
/// of the table, limited so the interpolant stays monotone. Beyond `r_max`
/// the large-r series takes over.
#[derive(Debug, Clone)]
pub struct KernelProfile {
    alpha: f64,
    r_max: f64,
    h: f64,
    radii: Vec<f64>,
    values: Vec<f64>,
    log_values: Vec<f64>,
    slopes: Vec<[f64; 2]>,
    tail: TailSeries,
}

pub(crate) fn check_alpha_kernel(alpha: f64) -> Result<()> {
    check_range("alpha", alpha, alpha > 1.0 && alpha <= 2.0, "alpha ∈ (1, 2]")
}

impl KernelProfile {
    fn from_table(alpha: f64, r_max: f64, values: Vec<f64>) -> Result<Self> {
        let count = values.len();
        if count < STENCIL + 1 {
            return Err(Error::Profile(format!("table needs at least {} nodes", STENCIL + 1)));
        }
        for (i, w) in values.windows(2).enumerate() {
            if !(w[1] > 0.0 && w[1] < w[0]) {
                return Err(Error::Profile(format!(
                    "values must be positive and strictly decreasing (node {})",
                    i + 1
                )));
            }
        }
        let h = r_max.ln_1p() / (count - 1) as f64;
        let radii: Vec<f64> = (0..count).map(|i| (i as f64 * h).exp_m1()).collect();
        let log_values: Vec<f64> = values.iter().map(|v| v.ln()).collect();
        let raw = fd_slopes(&log_values, h);
        let slopes = limit_slopes(&log_values, &raw, h);
        Ok(Self {
            alpha,
            r_max,
            h,
            radii,
            values,
            log_values,
            slopes,
            tail: TailSeries::new(alpha),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Node spacing in u = ln(1 + r).
    pub fn spacing(&self) -> f64 {
        self.h
    }

    /// Decay exponent 2 + α of the power tail.
    pub fn tail_exponent(&self) -> f64 {
        2.0 + self.alpha
    }

    /// p(1, r) for r ≥ 0.
    pub fn eval_radial(&self, r: f64) -> f64 {
        let r = r.abs();
        if r >= self.r_max {
            return self.tail.density(r);
        }
        let u = r.ln_1p();
        let last = self.values.len() - 2;
        let i = ((u / self.h) as usize).min(last);
        let s = (u / self.h - i as f64).clamp(0.0, 1.0);
        let (y0, y1) = (self.log_values[i], self.log_values[i + 1]);
        let [m0, m1] = self.slopes[i];
        let s2 = s * s;
        let s3 = s2 * s;
        let y = (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * self.h * m0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * self.h * m1;
        y.exp()
    }

    /// p(1, x).
    pub fn eval_unit(&self, x: [f64; 2]) -> f64 {
        self.eval_radial(x[0].hypot(x[1]))
    }

    /// 2π ∫_0^∞ p(1, r) r dr: Gauss quadrature of the interpolant on each
    /// u-cell plus the exact mass of the tail series.
    pub fn mass(&self) -> f64 {
        let rule = gauss_legendre(6);
        let mut acc = Neumaier::default();
        for i in 0..self.values.len() - 1 {
            let (u0, u1) = (i as f64 * self.h, (i + 1) as f64 * self.h);
            acc.add(rule.integrate(u0, u1, |u| {
                let r = u.exp_m1();
                self.eval_radial(r) * r * (1.0 + r)
            }));
        }
        2.0 * PI * acc.sum() + self.tail.mass_beyond(self.r_max)
    }

    /// Little-endian binary table: magic, version, α, r_max, count, radii, values.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(32 + 16 * self.values.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&self.alpha.to_le_bytes());
        out.extend_from_slice(&self.r_max.to_le_bytes());
        out.extend_from_slice(&(self.values.len() as u64).to_le_bytes());
        for r in &self.radii {
            out.extend_from_slice(&r.to_le_bytes());
        }
        for v in &self.values {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |msg: &str| Error::Profile(msg.to_string());
        if bytes.len() < 32 || &bytes[0..4] != MAGIC {
            return Err(bad("missing SKPF header"));
        }
        let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
        let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
        if u32_at(4) != VERSION {
            return Err(bad("unsupported profile version"));
        }
        let alpha = f64_at(8);
        let r_max = f64_at(16);
        let count = u64::from_le_bytes(bytes[24..32].try_into().unwrap()) as usize;
        check_alpha_kernel(alpha)?;
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(bad("r_max must be positive"));
        }
        if count > (bytes.len() - 32) / 16 || bytes.len() != 32 + 16 * count {
            return Err(bad("table length does not match count"));
        }
        let radii: Vec<f64> = (0..count).map(|i| f64_at(32 + 8 * i)).collect();
        let values: Vec<f64> = (0..count).map(|i| f64_at(32 + 8 * (count + i))).collect();
        let profile = Self::from_table(alpha, r_max, values)?;
        for (a, b) in radii.iter().zip(&profile.radii) {
            if (a - b).abs() > 1e-9 * (1.0 + b) {
                return Err(bad("radii are not uniform in ln(1 + r) up to r_max"));
            }
        }
        Ok(profile)
    }
}

/// First derivatives of a uniformly sampled function, 7-point stencils
/// (centred inside, one-sided at the ends).
fn fd_slopes(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    (0..n)
        .map(|i| {
            let start = i.saturating_sub(STENCIL / 2).min(n - STENCIL);
            let xs: Vec<f64> = (start..start + STENCIL).map(|j| j as f64).collect();
            let w = first_derivative_weights(i as f64, &xs);
            w.iter().zip(&y[start..start + STENCIL]).map(|(w, v)| w * v).sum::<f64>() / h
        })
        .collect()
}

/// Per-interval Fritsch–Carlson limiting of Hermite slopes.
fn limit_slopes(y: &[f64], m: &[f64], h: f64) -> Vec<[f64; 2]> {
    (0..y.len() - 1)
        .map(|i| {
            let delta = (y[i + 1] - y[i]) / h;
            let (mut a, mut b) = (m[i], m[i + 1]);
            if delta == 0.0 {
                return [0.0, 0.0];
            }
            if a / delta < 0.0 {
                a = 0.0;
            }
            if b / delta < 0.0 {
                b = 0.0;
            }
            let (ra, rb) = (a / delta, b / delta);
            let norm = ra * ra + rb * rb;
            if norm > 9.0 {
                let tau = 3.0 / norm.sqrt();
                a = tau * ra * delta;
                b = tau * rb * delta;
            }
            [a, b]
        })
        .collect()
}

/// Builds p(1, ·) on [0, r_max] by Hankel quadrature, refining the table
/// until cell midpoints agree with direct quadrature to relative `tol`.
pub fn build_profile(alpha: f64, r_max: f64, tol: f64) -> Result<KernelProfile> {
    check_alpha_kernel(alpha)?;
    check_range("r_max", r_max, r_max > 0.0 && r_max.is_finite(), "r_max > 0")?;
    check_range("tol", tol, tol > 0.0, "tol > 0")?;
    let u_max = r_max.ln_1p();
    let mut cells = ((u_max / 0.02).ceil() as usize).max(STENCIL);
    for _ in 0..5 {
        let h = u_max / cells as f64;
        let values = (0..=cells)
            .map(|i| hankel::density(alpha, (i as f64 * h).exp_m1()))
            .collect::<Result<Vec<_>>>()?;
        let profile = KernelProfile::from_table(alpha, r_max, values)?;
        let mut worst = 0.0f64;
        for i in (0..cells).step_by(2) {
            let r = ((i as f64 + 0.5) * h).exp_m1();
            let exact = hankel::density(alpha, r)?;
            worst = worst.max((profile.eval_radial(r) / exact - 1.0).abs());
        }
        if worst <= tol {
            return Ok(profile);
        }
        cells *= 2;
    }
    Err(Error::Profile(format!(
        "interpolation error stayed above tol = {tol:e} after refinement"
    )))
}

/// Default table extent for a given α. The large-r series is used beyond 30;
/// for the Gaussian endpoint quadrature cancellation limits the table to 8.
pub fn default_r_max(alpha: f64) -> f64 {
    if alpha == 2.0 {
        8.0
    } else {
        30.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn profile15() -> &'static KernelProfile {
        static P: OnceLock<KernelProfile> = OnceLock::new();
        P.get_or_init(|| build_profile(1.5, 30.0, 1e-9).unwrap())
    }

    #[test]
    fn gaussian_endpoint_value() {
        let p = build_profile(2.0, 8.0, 1e-9).unwrap();
        assert!((p.eval_radial(0.0) - 1.0 / (4.0 * PI)).abs() < 1e-14);
        for r in [0.7f64, 2.0, 5.5, 9.0] {
            let exact = (-r * r / 4.0).exp() / (4.0 * PI);
            assert!((p.eval_radial(r) / exact - 1.0).abs() < 1e-8, "r = {r}");
        }
        assert!((p.mass() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn mass_is_one() {
        assert!((profile15().mass() - 1.0).abs() < 1e-8, "{}", profile15().mass());
        for &alpha in &[1.1, 1.3, 1.8] {
            let p = build_profile(alpha, 30.0, 1e-8).unwrap();
            assert!((p.mass() - 1.0).abs() < 1e-8, "alpha = {alpha}: {}", p.mass());
        }
    }

    #[test]
    fn interpolant_matches_quadrature_off_nodes() {
        let p = profile15();
        for i in 0..40 {
            let r = 0.037 + 0.77 * i as f64;
            let exact = hankel::density(1.5, r).unwrap();
            assert!((p.eval_radial(r) / exact - 1.0).abs() < 1e-8, "r = {r}");
        }
    }

    #[test]
    fn tail_is_continuous_at_r_max() {
        let p = profile15();
        let inside = p.eval_radial(p.r_max() * (1.0 - 1e-12));
        let outside = p.eval_radial(p.r_max());
        assert!((inside / outside - 1.0).abs() < 1e-9);
    }

    #[test]
    fn values_positive_decreasing_and_comparable_to_power_tail() {
        let p = profile15();
        let weighted: Vec<f64> = p
            .radii()
            .iter()
            .zip(p.values())
            .map(|(r, v)| v * (1.0 + r).powf(p.tail_exponent()))
            .collect();
        let lo = weighted.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = weighted.iter().copied().fold(0.0, f64::max);
        assert!(lo > 0.0 && hi.is_finite() && hi / lo < 100.0);
        let mut prev = f64::INFINITY;
        for i in 0..2000 {
            let v = p.eval_radial(0.02 * i as f64);
            assert!(v > 0.0 && v < prev);
            prev = v;
        }
    }

    #[test]
    fn binary_round_trip() {
        let p = profile15();
        let q = KernelProfile::from_bytes(&p.to_bytes()).unwrap();
        assert_eq!(q.values(), p.values());
        assert_eq!(q.eval_radial(3.3), p.eval_radial(3.3));
        let mut broken = p.to_bytes();
        broken[0] = b'X';
        assert!(KernelProfile::from_bytes(&broken).is_err());
        assert!(KernelProfile::from_bytes(&p.to_bytes()[..100]).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(build_profile(1.0, 30.0, 1e-8).is_err());
        assert!(build_profile(2.1, 30.0, 1e-8).is_err());
        assert!(build_profile(1.5, -1.0, 1e-8).is_err());
        assert!(build_profile(1.5, 30.0, 0.0).is_err());
    }
}
