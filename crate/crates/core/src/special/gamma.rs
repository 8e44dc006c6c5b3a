//! Gamma and Beta functions.

use std::f64::consts::PI;

use crate::error::{check_range, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    LANCZOS[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS[0], |acc, (i, c)| acc + c / (x + i as f64 + 1.0))
}

/// Γ(x) by the Lanczos approximation (g = 7, nine terms), reflected for x < 1/2.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let t = x + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * lanczos_sum(x)
    }
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x)
    } else {
        let x = x - 1.0;
        let t = x + LANCZOS_G + 0.5;
        0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + lanczos_sum(x).ln()
    }
}

/// B(a, b) = Γ(a)Γ(b)/Γ(a+b).
pub fn beta(a: f64, b: f64) -> Result<f64> {
    check_range("a", a, a > 0.0 && a.is_finite(), "a > 0")?;
    check_range("b", b, b > 0.0 && b.is_finite(), "b > 0")?;
    if a + b < 140.0 {
        Ok(gamma(a) * gamma(b) / gamma(a + b))
    } else {
        Ok((ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_and_half_integer_values() {
        assert!((gamma(1.0) - 1.0).abs() < 1e-15);
        assert!((gamma(5.0) - 24.0).abs() < 24.0 * 1e-14);
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(1.5) - 0.5 * PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn agrees_with_libm() {
        for i in 1..400 {
            let x = 0.013 * i as f64 + 0.001;
            let rel = (gamma(x) / libm::tgamma(x) - 1.0).abs();
            assert!(rel < 1e-13, "x = {x}, rel = {rel:e}");
            let d = (ln_gamma(x) - libm::lgamma(x)).abs();
            assert!(d < 1e-13 * (1.0 + libm::lgamma(x).abs()), "x = {x}");
        }
    }

    #[test]
    fn beta_reflection_values() {
        assert!((beta(0.5, 0.5).unwrap() - PI).abs() < PI * 1e-12);
        let expect = 2.0 * PI / 3f64.sqrt();
        assert!((beta(1.0 / 3.0, 2.0 / 3.0).unwrap() / expect - 1.0).abs() < 1e-12);
        assert!((beta(0.3, 1.7).unwrap() - beta(1.7, 0.3).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn beta_rejects_nonpositive() {
        assert!(beta(0.0, 1.0).is_err());
        assert!(beta(1.0, -2.0).is_err());
    }
}
