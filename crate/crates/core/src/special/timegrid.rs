//! Product quadrature for ∫_{t0}^{t1} (t1−s)^{−a}(s−t0)^{−b} g(s) ds.
//!
//! Two layouts are offered. [`TimeGrid::new`] builds a composite grid: each
//! half of the interval is mapped by s − t0 = H·u^g (left) or t1 − s = H·u^g
//! (right) with g = k/(1−c), k ∈ {1, 2}, so that the endpoint singularity
//! times the Jacobian becomes the polynomial u^{k−1}; the u-cells carry
//! Gauss–Legendre nodes. [`TimeGrid::jacobi`] is a single Gauss–Jacobi rule,
//! exact for the weight against polynomials of degree 2m − 1.

use crate::error::{check_range, Result};

use super::gamma::beta;
use super::quadrature::{adaptive, gauss_jacobi, gauss_legendre, AdaptiveOptions, Neumaier};

/// Default node count of the Gauss–Jacobi product rule.
pub const DEFAULT_JACOBI_NODES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Resolution of a [`TimeGrid`]: `cells` uniform u-cells per half with
/// `points` Gauss nodes each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridResolution {
    pub cells: usize,
    pub points: usize,
}

impl Default for GridResolution {
    fn default() -> Self {
        Self { cells: 8, points: 4 }
    }
}

impl GridResolution {
    pub fn nodes(&self) -> usize {
        2 * self.cells * self.points
    }
}

/// One u-cell; its nodes are `first..first + len` in the grid's arrays.
#[derive(Debug, Clone, Copy)]
pub struct TimeCell {
    pub side: Side,
    pub u_lo: f64,
    pub u_hi: f64,
    pub s_lo: f64,
    pub s_hi: f64,
    pub first: usize,
    pub len: usize,
}

#[derive(Debug, Clone, Copy)]
struct HalfMap {
    half: f64,
    grading: f64,
    power: i32,
}

fn grading(c: f64) -> (f64, i32) {
    let k = if c >= 0.5 { 1 } else { 2 };
    (k as f64 / (1.0 - c), k)
}

impl HalfMap {
    fn new(half: f64, c: f64) -> Self {
        let (grading, power) = grading(c);
        Self { half, grading, power }
    }

    /// Distance from the near endpoint.
    fn near(&self, u: f64) -> f64 {
        self.half * u.powf(self.grading)
    }

    /// Distance from the far endpoint.
    fn far(&self, u: f64) -> f64 {
        self.half * (2.0 - u.powf(self.grading))
    }

    /// near^{−c}·ds/du with the singular factor cancelled analytically.
    fn jacobian(&self, c: f64, u: f64) -> f64 {
        self.half.powf(1.0 - c) * self.grading * u.powi(self.power - 1)
    }

    fn u_of(&self, near: f64) -> f64 {
        (near / self.half).clamp(0.0, 1.0).powf(1.0 / self.grading)
    }
}

#[derive(Debug, Clone)]
pub struct TimeGrid {
    t0: f64,
    t1: f64,
    a: f64,
    b: f64,
    left: HalfMap,
    right: HalfMap,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    dist_left: Vec<f64>,
    dist_right: Vec<f64>,
    cells: Vec<TimeCell>,
}

impl TimeGrid {
    /// Grid on [t0, t1] for the weight (t1−s)^{−a}(s−t0)^{−b}.
    pub fn new(t0: f64, t1: f64, a: f64, b: f64, res: GridResolution) -> Result<Self> {
        check_range("a", a, (0.0..1.0).contains(&a), "a ∈ [0, 1)")?;
        check_range("b", b, (0.0..1.0).contains(&b), "b ∈ [0, 1)")?;
        check_range("t1", t1, t1.is_finite() && t1 > t0 && t0.is_finite(), "t1 > t0")?;
        check_range("cells", res.cells as f64, res.cells >= 1, "at least one cell")?;
        check_range("points", res.points as f64, res.points >= 1, "at least one point")?;
        let half = 0.5 * (t1 - t0);
        let left = HalfMap::new(half, b);
        let right = HalfMap::new(half, a);
        let rule = gauss_legendre(res.points);
        let mut grid = Self {
            t0,
            t1,
            a,
            b,
            left,
            right,
            nodes: Vec::with_capacity(res.nodes()),
            weights: Vec::with_capacity(res.nodes()),
            dist_left: Vec::with_capacity(res.nodes()),
            dist_right: Vec::with_capacity(res.nodes()),
            cells: Vec::with_capacity(2 * res.cells),
        };
        let du = 1.0 / res.cells as f64;
        for c in 0..res.cells {
            grid.push_cell(Side::Left, c as f64 * du, (c + 1) as f64 * du, &rule.nodes, &rule.weights);
        }
        for c in (0..res.cells).rev() {
            grid.push_cell(Side::Right, c as f64 * du, (c + 1) as f64 * du, &rule.nodes, &rule.weights);
        }
        Ok(grid)
    }

    /// m-point Gauss–Jacobi grid on [t0, t1]. It has no cells.
    pub fn jacobi(t0: f64, t1: f64, a: f64, b: f64, m: usize) -> Result<Self> {
        check_range("a", a, (0.0..1.0).contains(&a), "a ∈ [0, 1)")?;
        check_range("b", b, (0.0..1.0).contains(&b), "b ∈ [0, 1)")?;
        check_range("t1", t1, t1.is_finite() && t1 > t0 && t0.is_finite(), "t1 > t0")?;
        check_range("m", m as f64, m >= 1, "at least one node")?;
        let half = 0.5 * (t1 - t0);
        let rule = gauss_jacobi(m, -a, -b);
        let scale = half.powf(1.0 - a - b);
        let dist_left: Vec<f64> = rule.nodes.iter().map(|x| half * (1.0 + x)).collect();
        let dist_right: Vec<f64> = rule.nodes.iter().map(|x| half * (1.0 - x)).collect();
        Ok(Self {
            t0,
            t1,
            a,
            b,
            left: HalfMap::new(half, b),
            right: HalfMap::new(half, a),
            nodes: dist_left.iter().map(|d| t0 + d).collect(),
            weights: rule.weights.iter().map(|w| w * scale).collect(),
            dist_left,
            dist_right,
            cells: Vec::new(),
        })
    }

    fn push_cell(&mut self, side: Side, u_lo: f64, u_hi: f64, xs: &[f64], ws: &[f64]) {
        let first = self.nodes.len();
        let hu = 0.5 * (u_hi - u_lo);
        let cu = 0.5 * (u_hi + u_lo);
        let mut pts: Vec<(f64, f64, f64, f64)> = xs
            .iter()
            .zip(ws)
            .map(|(x, w)| {
                let u = cu + hu * x;
                let (dl, dr, w) = match side {
                    Side::Left => {
                        let (near, far) = (self.left.near(u), self.left.far(u));
                        (near, far, w * hu * self.left.jacobian(self.b, u) * far.powf(-self.a))
                    }
                    Side::Right => {
                        let (near, far) = (self.right.near(u), self.right.far(u));
                        (far, near, w * hu * self.right.jacobian(self.a, u) * far.powf(-self.b))
                    }
                };
                (self.t0 + dl, w, dl, dr)
            })
            .collect();
        if side == Side::Right {
            pts.reverse();
        }
        for (s, w, dl, dr) in pts {
            self.nodes.push(s);
            self.weights.push(w);
            self.dist_left.push(dl);
            self.dist_right.push(dr);
        }
        let (s_lo, s_hi) = match side {
            Side::Left => (self.t0 + self.left.near(u_lo), self.t0 + self.left.near(u_hi)),
            Side::Right => (self.t1 - self.right.near(u_hi), self.t1 - self.right.near(u_lo)),
        };
        self.cells.push(TimeCell {
            side,
            u_lo,
            u_hi,
            s_lo,
            s_hi,
            first,
            len: xs.len(),
        });
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn exponents(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// s_i − t0, exact to working precision near t0.
    pub fn dist_left(&self) -> &[f64] {
        &self.dist_left
    }

    /// t1 − s_i, exact to working precision near t1.
    pub fn dist_right(&self) -> &[f64] {
        &self.dist_right
    }

    pub fn cells(&self) -> &[TimeCell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Mapping coordinate u of time s within the given half.
    pub fn u_of(&self, side: Side, s: f64) -> f64 {
        match side {
            Side::Left => self.left.u_of(s - self.t0),
            Side::Right => self.right.u_of(self.t1 - s),
        }
    }

    /// Time s at mapping coordinate u of the given half.
    pub fn s_of(&self, side: Side, u: f64) -> f64 {
        match side {
            Side::Left => self.t0 + self.left.near(u),
            Side::Right => self.t1 - self.right.near(u),
        }
    }

    /// Σ w_i g(s_i).
    pub fn integrate(&self, mut g: impl FnMut(f64) -> f64) -> f64 {
        let mut acc = Neumaier::default();
        for (s, w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * g(*s));
        }
        acc.sum()
    }

    pub fn weight_sum(&self) -> f64 {
        let mut acc = Neumaier::default();
        for w in &self.weights {
            acc.add(*w);
        }
        acc.sum()
    }

    /// Closed form of the weight integral, (t1−t0)^{1−a−b}B(1−b, 1−a).
    pub fn exact_weight_sum(&self) -> Result<f64> {
        Ok((self.t1 - self.t0).powf(1.0 - self.a - self.b) * beta(1.0 - self.b, 1.0 - self.a)?)
    }
}

/// ∫_0^t (t−s)^{−a}s^{−b} ds by product quadrature.
pub fn singular_time_convolution(a: f64, b: f64, t: f64) -> Result<f64> {
    check_range("t", t, t > 0.0 && t.is_finite(), "t > 0")?;
    let grid = TimeGrid::jacobi(0.0, t, a, b, DEFAULT_JACOBI_NODES)?;
    Ok(grid.weight_sum())
}

/// Adaptive evaluation of ∫_{t0}^{t1} (t1−s)^{−a}(s−t0)^{−b} g(s, s−t0, t1−s) ds,
/// where g is bounded near both endpoints. The distances are passed so that
/// g can avoid cancellation near the endpoints.
pub fn singular_integral(
    t0: f64,
    t1: f64,
    a: f64,
    b: f64,
    opts: AdaptiveOptions,
    mut g: impl FnMut(f64, f64, f64) -> f64,
) -> Result<f64> {
    check_range("a", a, (0.0..1.0).contains(&a), "a ∈ [0, 1)")?;
    check_range("b", b, (0.0..1.0).contains(&b), "b ∈ [0, 1)")?;
    check_range("t1", t1, t1 > t0, "t1 > t0")?;
    let half = 0.5 * (t1 - t0);
    let left = HalfMap::new(half, b);
    let right = HalfMap::new(half, a);
    let il = adaptive(0.0, 1.0, opts, |u| {
        let (dl, dr) = (left.near(u), left.far(u));
        left.jacobian(b, u) * dr.powf(-a) * g(t0 + dl, dl, dr)
    })?;
    let ir = adaptive(0.0, 1.0, opts, |u| {
        let (dr, dl) = (right.near(u), right.far(u));
        right.jacobian(a, u) * dl.powf(-b) * g(t1 - dr, dl, dr)
    })?;
    Ok(il + ir)
}
