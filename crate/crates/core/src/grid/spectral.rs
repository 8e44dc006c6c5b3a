use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::field::{check_alpha_spectral, GridSpec, MultiIndex, RealField, SpectralField};
use crate::error::{check_range, Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X1,
    X2,
}

/// FFT plans and wavenumber tables for one [`GridSpec`].
///
/// Every operator here is a Fourier multiplier, so all of them commute and
/// act exactly on trigonometric polynomials. Odd symbols use a wavenumber
/// table with the Nyquist entry set to zero so that real fields map to real
/// fields.
#[derive(Clone)]
pub struct Spectral {
    grid: GridSpec,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    k: Vec<f64>,
    k_odd: Vec<f64>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("grid", &self.grid).finish()
    }
}

impl Spectral {
    pub fn new(grid: GridSpec) -> Self {
        let n = grid.n();
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let k: Vec<f64> = (0..n).map(|m| grid.wavenumber(m)).collect();
        let mut k_odd = k.clone();
        k_odd[n / 2] = 0.0;
        Self {
            grid,
            fwd,
            inv,
            k,
            k_odd,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Wavenumber components `(ξ1, ξ2)` of the coefficient at flat index `idx`.
    pub fn xi(&self, idx: usize) -> (f64, f64) {
        let n = self.grid.n();
        (self.k[idx % n], self.k[idx / n])
    }

    pub fn abs_xi(&self, idx: usize) -> f64 {
        let (a, b) = self.xi(idx);
        a.hypot(b)
    }

    fn xi_odd(&self, idx: usize) -> (f64, f64) {
        let n = self.grid.n();
        (self.k_odd[idx % n], self.k_odd[idx / n])
    }

    fn fft2(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.grid.n();
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(data, &mut scratch);
        transpose_square(data, n);
        plan.process_with_scratch(data, &mut scratch);
        transpose_square(data, n);
    }

    pub fn forward(&self, f: &RealField) -> Result<SpectralField> {
        if f.grid() != &self.grid {
            return Err(Error::ShapeMismatch {
                expected: self.grid.len(),
                got: f.grid().len(),
            });
        }
        if let Some(index) = f.values().iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let mut data: Vec<Complex64> = f.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft2(&mut data, &self.fwd);
        let norm = 1.0 / self.grid.len() as f64;
        data.iter_mut().for_each(|c| *c *= norm);
        Ok(SpectralField::from_raw(self.grid, data))
    }

    pub fn inverse(&self, spec: &SpectralField) -> RealField {
        let mut data = spec.coeffs().to_vec();
        self.fft2(&mut data, &self.inv);
        RealField::from_raw(self.grid, data.into_iter().map(|c| c.re).collect())
    }

    /// Multiplies every coefficient by `symbol(idx)`.
    pub fn apply_symbol(
        &self,
        spec: &SpectralField,
        symbol: impl Fn(usize) -> Complex64,
    ) -> SpectralField {
        let coeffs = spec
            .coeffs()
            .iter()
            .enumerate()
            .map(|(idx, c)| c * symbol(idx))
            .collect();
        SpectralField::from_raw(self.grid, coeffs)
    }

    pub fn riesz_symbol(&self, idx: usize, axis: Axis) -> Complex64 {
        let r = self.abs_xi(idx);
        if r == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let (a, b) = self.xi_odd(idx);
        let xi = match axis {
            Axis::X1 => a,
            Axis::X2 => b,
        };
        I * (xi / r)
    }

    pub fn derivative_symbol(&self, idx: usize, kappa: MultiIndex) -> Complex64 {
        let (a, b) = self.xi(idx);
        let (ao, bo) = self.xi_odd(idx);
        let x1 = if kappa.k1 % 2 == 1 { ao } else { a };
        let x2 = if kappa.k2 % 2 == 1 { bo } else { b };
        (I * x1).powu(kappa.k1 as u32) * (I * x2).powu(kappa.k2 as u32)
    }

    pub fn fractional_laplacian_spectral(&self, spec: &SpectralField, alpha: f64) -> Result<SpectralField> {
        check_alpha_spectral(alpha)?;
        Ok(self.apply_symbol(spec, |idx| Complex64::new(self.abs_xi(idx).powf(alpha), 0.0)))
    }

    pub fn semigroup_spectral(&self, spec: &SpectralField, t: f64, alpha: f64) -> Result<SpectralField> {
        check_alpha_spectral(alpha)?;
        check_range("t", t, t >= 0.0 && t.is_finite(), "t >= 0")?;
        Ok(self.apply_symbol(spec, |idx| {
            Complex64::new((-t * self.abs_xi(idx).powf(alpha)).exp(), 0.0)
        }))
    }

    pub fn riesz_spectral(&self, spec: &SpectralField, axis: Axis) -> SpectralField {
        self.apply_symbol(spec, |idx| self.riesz_symbol(idx, axis))
    }

    /// `R⊥ = (-R_2, R_1)` in Fourier space.
    pub fn riesz_perp_spectral(&self, spec: &SpectralField) -> (SpectralField, SpectralField) {
        let u1 = self.apply_symbol(spec, |idx| -self.riesz_symbol(idx, Axis::X2));
        let u2 = self.riesz_spectral(spec, Axis::X1);
        (u1, u2)
    }

    pub fn derivative_spectral(&self, spec: &SpectralField, kappa: MultiIndex) -> SpectralField {
        self.apply_symbol(spec, |idx| self.derivative_symbol(idx, kappa))
    }

    /// `∂_1 F_1 + ∂_2 F_2` in Fourier space.
    pub fn divergence_spectral(&self, f1: &SpectralField, f2: &SpectralField) -> SpectralField {
        let coeffs = f1
            .coeffs()
            .iter()
            .zip(f2.coeffs())
            .enumerate()
            .map(|(idx, (a, b))| {
                let (x1, x2) = self.xi_odd(idx);
                I * (a * x1 + b * x2)
            })
            .collect();
        SpectralField::from_raw(self.grid, coeffs)
    }

    /// 2/3-rule: zero every mode with `max(|k1|, |k2|) > floor(n/3)`.
    pub fn dealias(&self, spec: &SpectralField) -> SpectralField {
        let mask = self.dealias_mask();
        let coeffs = spec
            .coeffs()
            .iter()
            .zip(&mask)
            .map(|(c, &keep)| if keep { *c } else { Complex64::new(0.0, 0.0) })
            .collect();
        SpectralField::from_raw(self.grid, coeffs)
    }

    pub fn dealias_mask(&self) -> Vec<bool> {
        let n = self.grid.n();
        let cut = (n / 3) as i64;
        (0..self.grid.len())
            .map(|idx| {
                let k1 = self.grid.mode(idx % n).abs();
                let k2 = self.grid.mode(idx / n).abs();
                k1.max(k2) <= cut
            })
            .collect()
    }

    /// `‖f‖_2` from the coefficients (Parseval with the `L^2` box measure).
    pub fn spectral_l2_norm(&self, spec: &SpectralField) -> f64 {
        let s: f64 = spec.coeffs().iter().map(|c| c.norm_sqr()).sum();
        self.grid.length() * s.sqrt()
    }

    fn check_grid(&self, f: &RealField) -> Result<()> {
        if f.grid() != &self.grid {
            return Err(Error::ShapeMismatch {
                expected: self.grid.len(),
                got: f.grid().len(),
            });
        }
        Ok(())
    }

    pub fn apply_fractional_laplacian(&self, f: &RealField, alpha: f64) -> Result<RealField> {
        self.check_grid(f)?;
        let spec = self.forward(f)?;
        Ok(self.inverse(&self.fractional_laplacian_spectral(&spec, alpha)?))
    }

    /// `P_t f`, convolution with the periodized α-stable kernel.
    pub fn apply_semigroup(&self, f: &RealField, t: f64, alpha: f64) -> Result<RealField> {
        self.check_grid(f)?;
        let spec = self.forward(f)?;
        Ok(self.inverse(&self.semigroup_spectral(&spec, t, alpha)?))
    }

    pub fn apply_riesz(&self, f: &RealField, axis: Axis) -> Result<RealField> {
        self.check_grid(f)?;
        let spec = self.forward(f)?;
        Ok(self.inverse(&self.riesz_spectral(&spec, axis)))
    }

    pub fn apply_riesz_perp(&self, f: &RealField) -> Result<(RealField, RealField)> {
        self.check_grid(f)?;
        let spec = self.forward(f)?;
        let (u1, u2) = self.riesz_perp_spectral(&spec);
        Ok((self.inverse(&u1), self.inverse(&u2)))
    }

    pub fn apply_derivative(&self, f: &RealField, kappa: MultiIndex) -> Result<RealField> {
        self.check_grid(f)?;
        let spec = self.forward(f)?;
        Ok(self.inverse(&self.derivative_spectral(&spec, kappa)))
    }

    pub fn divergence(&self, f1: &RealField, f2: &RealField) -> Result<RealField> {
        let a = self.forward(f1)?;
        let b = self.forward(f2)?;
        Ok(self.inverse(&self.divergence_spectral(&a, &b)))
    }
}

fn transpose_square(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

/// Discrete `L^p` norm `(Σ |f|^p dx^2)^{1/p}`, or the sup norm for `p = ∞`.
pub fn lp_norm(f: &RealField, p: f64) -> Result<f64> {
    check_range("p", p, p >= 1.0, "p >= 1")?;
    let m = f.max_abs();
    if p.is_infinite() || m == 0.0 {
        return Ok(m);
    }
    let dx = f.grid().dx();
    let s: f64 = f.values().iter().map(|v| (v.abs() / m).powf(p)).sum();
    Ok(m * (s * dx * dx).powf(1.0 / p))
}

/// Pointwise Euclidean magnitude of a vector field.
pub fn magnitude(a: &RealField, b: &RealField) -> Result<RealField> {
    a.zip_with(b, f64::hypot)
}
