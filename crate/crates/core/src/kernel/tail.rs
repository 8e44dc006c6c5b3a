//! Large-r expansion of the unit-time density,
//! p(1, r) ~ Σ_k c_k r^{−kα−2}, c_k = (−1)^{k+1} 2^{kα} Γ(1+kα/2)² sin(πkα/2)/(π² k!).
//!
//! The series is asymptotic; at r ≥ 30 twelve terms are accurate to about
//! machine precision for every α in (1, 2). At α = 2 all coefficients vanish
//! and the tail is the Gaussian itself.

use std::f64::consts::PI;

use crate::special::ln_gamma;

pub(crate) const TAIL_TERMS: usize = 12;

#[derive(Debug, Clone)]
pub(crate) struct TailSeries {
    alpha: f64,
    coeffs: Vec<f64>,
}

impl TailSeries {
    pub(crate) fn new(alpha: f64) -> Self {
        let coeffs = if alpha == 2.0 {
            vec![0.0; TAIL_TERMS]
        } else {
            (1..=TAIL_TERMS)
                .map(|k| {
                    let kf = k as f64;
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    let log_mag = kf * alpha * 2f64.ln() + 2.0 * ln_gamma(1.0 + kf * alpha / 2.0)
                        - ln_gamma(kf + 1.0)
                        - 2.0 * PI.ln();
                    sign * log_mag.exp() * (PI * kf * alpha / 2.0).sin()
                })
                .collect()
        };
        Self { alpha, coeffs }
    }

    fn gaussian(&self) -> bool {
        self.alpha == 2.0
    }

    /// Leading coefficient c_1.
    #[cfg(test)]
    pub(crate) fn leading(&self) -> f64 {
        self.coeffs[0]
    }

    fn sum(&self, r: f64, weight: impl Fn(f64) -> f64, extra: f64) -> f64 {
        let mut acc = 0.0;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            let e = (k + 1) as f64 * self.alpha;
            acc += c * weight(e) * r.powf(-e - extra);
        }
        acc
    }

    pub(crate) fn density(&self, r: f64) -> f64 {
        if self.gaussian() {
            return (-r * r / 4.0).exp() / (4.0 * PI);
        }
        self.sum(r, |_| 1.0, 2.0)
    }

    /// −p'(r)/r.
    pub(crate) fn minus_dp_over_r(&self, r: f64) -> f64 {
        if self.gaussian() {
            return self.density(r) / 2.0;
        }
        self.sum(r, |e| e + 2.0, 4.0)
    }

    pub(crate) fn second_radial(&self, r: f64) -> f64 {
        if self.gaussian() {
            return self.density(r) * (r * r / 4.0 - 0.5);
        }
        self.sum(r, |e| (e + 2.0) * (e + 3.0), 4.0)
    }

    /// 2π ∫_R^∞ p(1, r) r dr.
    pub(crate) fn mass_beyond(&self, big_r: f64) -> f64 {
        if self.gaussian() {
            return (-big_r * big_r / 4.0).exp();
        }
        2.0 * PI * self.sum(big_r, |e| 1.0 / e, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::hankel;

    #[test]
    fn leading_term_is_levy_constant() {
        for &alpha in &[1.2, 1.5, 1.8] {
            let c1 = TailSeries::new(alpha).leading();
            let levy = alpha * 2f64.powf(alpha - 1.0) * libm::tgamma(1.0 + alpha / 2.0)
                / (PI * libm::tgamma(1.0 - alpha / 2.0));
            assert!((c1 / levy - 1.0).abs() < 1e-12, "alpha = {alpha}");
        }
    }

    #[test]
    fn series_matches_quadrature_at_moderate_radius() {
        for &alpha in &[1.2, 1.5, 1.8] {
            let tail = TailSeries::new(alpha);
            for &r in &[20.0, 30.0] {
                let q = hankel::density(alpha, r).unwrap();
                let s = tail.density(r);
                assert!((q / s - 1.0).abs() < 1e-8, "alpha = {alpha}, r = {r}: {q} vs {s}");
                let q1 = hankel::minus_dp_over_r(alpha, r).unwrap();
                assert!((q1 / tail.minus_dp_over_r(r) - 1.0).abs() < 1e-6, "alpha = {alpha}, r = {r}");
            }
        }
    }

    #[test]
    fn gaussian_tail_is_closed_form() {
        let t = TailSeries::new(2.0);
        assert!((t.density(3.0) - (-2.25f64).exp() / (4.0 * PI)).abs() < 1e-16);
        assert!((t.mass_beyond(0.0) - 1.0).abs() < 1e-15);
    }
}
