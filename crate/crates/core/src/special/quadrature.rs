//! Gauss–Legendre rules and a recursive adaptive integrator.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    fn compute(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// ∫_a^b f by this rule.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = Neumaier::default();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(c + h * x));
        }
        acc.sum() * h
    }
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Cached n-point Gauss–Legendre rule.
pub fn gauss_legendre(n: usize) -> Arc<GaussRule> {
    assert!(n >= 1, "rule needs at least one node");
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(GaussRule::compute(n)))
        .clone()
}

/// n-point Gauss–Jacobi rule for the weight (1−x)^p (1+x)^q on [−1, 1],
/// p, q > −1, by the Golub–Welsch eigenvalue method. Nodes ascend.
pub fn gauss_jacobi(n: usize, p: f64, q: f64) -> GaussRule {
    assert!(n >= 1 && p > -1.0 && q > -1.0, "invalid Jacobi rule parameters");
    let ab = p + q;
    let diag = |k: usize| -> f64 {
        let k = k as f64;
        let d = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
        if d == 0.0 {
            (q - p) / (ab + 2.0)
        } else {
            (q * q - p * p) / d
        }
    };
    let off = |k: usize| -> f64 {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        if k == 1 {
            (4.0 * (1.0 + p) * (1.0 + q) / ((2.0 + ab).powi(2) * (3.0 + ab))).sqrt()
        } else {
            (4.0 * kf * (kf + p) * (kf + q) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))).sqrt()
        }
    };
    let mut jac = nalgebra::DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        jac[(i, i)] = diag(i);
        if i + 1 < n {
            let b = off(i + 1);
            jac[(i, i + 1)] = b;
            jac[(i + 1, i)] = b;
        }
    }
    let mu0 = 2f64.powf(ab + 1.0) * super::gamma::beta(p + 1.0, q + 1.0).expect("positive arguments");
    let eig = nalgebra::SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], mu0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    GaussRule {
        nodes: pairs.iter().map(|x| x.0).collect(),
        weights: pairs.iter().map(|x| x.1).collect(),
    }
}

/// Compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct Neumaier {
    sum: f64,
    c: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn sum(&self) -> f64 {
        self.sum + self.c
    }
}

/// Tolerances for [`adaptive`]. Panels are bisected, worst first, until the
/// summed error estimate drops below `max(rel·|I|, abs)`.
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    pub rel: f64,
    pub abs: f64,
    pub max_panels: usize,
    pub order: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            rel: 1e-13,
            abs: 1e-300,
            max_panels: 4000,
            order: 10,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive Gauss–Legendre quadrature of f over [a, b].
pub fn adaptive(a: f64, b: f64, opts: AdaptiveOptions, mut f: impl FnMut(f64) -> f64) -> Result<f64> {
    let rule = gauss_legendre(opts.order);
    // A panel's value is its two-half estimate, its error the gap to the
    // one-panel estimate.
    let mut panel = |a: f64, b: f64| -> Panel {
        let m = 0.5 * (a + b);
        let whole = rule.integrate(a, b, &mut f);
        let value = rule.integrate(a, m, &mut f) + rule.integrate(m, b, &mut f);
        Panel { a, b, value, err: (value - whole).abs() }
    };
    let mut heap = std::collections::BinaryHeap::new();
    heap.push(panel(a, b));
    loop {
        let mut total = Neumaier::default();
        let mut err = 0.0;
        for p in heap.iter() {
            total.add(p.value);
            err += p.err;
        }
        let total = total.sum();
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::Quadrature { a, b, tol: opts.rel, estimate: f64::NAN });
        }
        if err <= (opts.rel * total.abs()).max(opts.abs) {
            return Ok(total);
        }
        let worst = heap.pop().expect("heap is never empty");
        let m = 0.5 * (worst.a + worst.b);
        if heap.len() + 2 > opts.max_panels || m <= worst.a || m >= worst.b {
            return Err(Error::Quadrature { a, b, tol: opts.rel, estimate: err });
        }
        heap.push(panel(worst.a, m));
        heap.push(panel(m, worst.b));
    }
}

/// Fornberg weights for the first derivative at `x0` from samples at `xs`.
pub fn first_derivative_weights(x0: f64, xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    // c[j][k]: weight of xs[j] for the k-th derivative, k ∈ {0, 1}.
    let mut c = vec![[0.0f64; 2]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                c[i][1] = c1 * (c[i - 1][0] - c5 * c[i - 1][1]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            c[j][1] = (c4 * c[j][1] - c[j][0]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|w| w[1]).collect()
}
