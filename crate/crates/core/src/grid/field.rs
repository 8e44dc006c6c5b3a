use num_complex::Complex64;

use crate::error::{check_range, Error, Result};

/// Largest differentiation order handled by the spectral multipliers.
pub const MAX_DERIVATIVE_ORDER: usize = 4;

/// Periodic square box `[-L/2, L/2)^2` sampled with `n` points per axis.
///
/// Grid point `(j1, j2)` sits at `((j1 - n/2) dx, (j2 - n/2) dx)`, so the
/// origin is the node `(n/2, n/2)`. Fields are stored row-major with `x2`
/// as the slow index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    n: usize,
    length: f64,
}

impl GridSpec {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n = {n} must be a power of two and at least 16"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "box length {length} must be positive"
            )));
        }
        Ok(Self { n, length })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Physical coordinate of node index `j` along either axis.
    pub fn coord(&self, j: usize) -> f64 {
        (j as f64 - (self.n / 2) as f64) * self.dx()
    }

    pub fn point(&self, idx: usize) -> [f64; 2] {
        [self.coord(idx % self.n), self.coord(idx / self.n)]
    }

    pub fn index(&self, j1: usize, j2: usize) -> usize {
        j2 * self.n + j1
    }

    pub fn origin_index(&self) -> usize {
        self.index(self.n / 2, self.n / 2)
    }

    /// Signed integer wavenumber of FFT index `m`, in `{-n/2, ..., n/2 - 1}`.
    pub fn mode(&self, m: usize) -> i64 {
        let n = self.n as i64;
        let m = m as i64;
        if m < n / 2 {
            m
        } else {
            m - n
        }
    }

    /// Angular wavenumber of FFT index `m`.
    pub fn wavenumber(&self, m: usize) -> f64 {
        self.fundamental() * self.mode(m) as f64
    }

    pub fn fundamental(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.length
    }

    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> RealField {
        let values = (0..self.len())
            .map(|idx| {
                let [x1, x2] = self.point(idx);
                f(x1, x2)
            })
            .collect();
        RealField { grid: *self, values }
    }
}

/// Real samples of a scalar field on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    grid: GridSpec,
    values: Vec<f64>,
}

impl RealField {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    pub(crate) fn from_raw(grid: GridSpec, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: GridSpec, value: f64) -> Self {
        Self {
            grid,
            values: vec![value; grid.len()],
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn at(&self, j1: usize, j2: usize) -> f64 {
        self.values[self.grid.index(j1, j2)]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| v * c)
    }

    pub fn abs(&self) -> Self {
        self.map(f64::abs)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// `∫ f dx` by the rectangle rule, exact for trigonometric polynomials.
    pub fn integral(&self) -> f64 {
        let dx = self.grid.dx();
        self.values.iter().sum::<f64>() * dx * dx
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub(crate) fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::ShapeMismatch {
                expected: self.grid.len(),
                got: other.grid.len(),
            });
        }
        Ok(())
    }
}

/// Fourier-series coefficients `c_k` with `f(x) = Σ c_k e^{i k·x}`.
///
/// Coefficients of a real field are conjugate-symmetric. Layout follows FFT
/// ordering on both axes, row-major with the `ξ2` index slow.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: GridSpec,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(grid: GridSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                got: coeffs.len(),
            });
        }
        Ok(Self { grid, coeffs })
    }

    pub(crate) fn from_raw(grid: GridSpec, coeffs: Vec<Complex64>) -> Self {
        Self { grid, coeffs }
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient at signed integer modes `(k1, k2)`.
    pub fn mode(&self, k1: i64, k2: i64) -> Complex64 {
        let n = self.grid.n() as i64;
        let m1 = k1.rem_euclid(n) as usize;
        let m2 = k2.rem_euclid(n) as usize;
        self.coeffs[self.grid.index(m1, m2)]
    }

    pub fn axpy(&mut self, a: f64, other: &Self) {
        for (c, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *c += o * a;
        }
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        }
    }
}

/// Differentiation multi-index `κ = (k1, k2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    pub k1: usize,
    pub k2: usize,
}

impl MultiIndex {
    pub fn new(k1: usize, k2: usize) -> Result<Self> {
        let order = k1 + k2;
        if order > MAX_DERIVATIVE_ORDER {
            return Err(Error::OrderTooHigh {
                order,
                max: MAX_DERIVATIVE_ORDER,
            });
        }
        Ok(Self { k1, k2 })
    }

    pub const ZERO: MultiIndex = MultiIndex { k1: 0, k2: 0 };

    pub fn order(&self) -> usize {
        self.k1 + self.k2
    }

    /// All multi-indices with `|κ| <= max_order`.
    pub fn up_to(max_order: usize) -> Vec<MultiIndex> {
        (0..=max_order)
            .flat_map(|o| (0..=o).map(move |k1| MultiIndex { k1, k2: o - k1 }))
            .collect()
    }
}

impl std::fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.k1, self.k2)
    }
}

pub(crate) fn check_alpha_spectral(alpha: f64) -> Result<()> {
    check_range("alpha", alpha, alpha > 1.0 && alpha <= 2.0, "(1, 2]")
}
