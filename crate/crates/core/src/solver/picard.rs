use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Propagator, SolverConfig};
use crate::error::{check_range, Error, Result};
use crate::grid::{RealField, SpectralField};
use crate::special::{GridResolution, TimeGrid};

#[derive(Debug, Clone)]
pub struct PicardResult {
    pub theta: RealField,
    /// sup over collocation times of ‖θ^{(n+1)} − θ^{(n)}‖_∞, one per iteration.
    pub distances: Vec<f64>,
}

/// θ^{(n_iter)}(t) for θ^{(n+1)}(τ) = P_τθ0 + ∫_0^τ P_{τ−s} N(θ^{(n)}(s)) ds,
/// N(θ) = −∇·(θ R⊥θ).
///
/// Iterates live on Chebyshev–Lobatto times in [0, t]; N between them is
/// reconstructed by barycentric interpolation and each Duhamel integral uses
/// a composite [`TimeGrid`] on [0, τ] graded toward both ends.
pub fn picard_iterate(
    theta0: &RealField,
    t: f64,
    n_iter: usize,
    resolution: GridResolution,
    config: &SolverConfig,
) -> Result<PicardResult> {
    duhamel_iterate(theta0, t, n_iter, resolution, config, 1.0)
}

/// Same iteration with the Duhamel term multiplied by `sign`.
pub(crate) fn duhamel_iterate(
    theta0: &RealField,
    t: f64,
    n_iter: usize,
    resolution: GridResolution,
    config: &SolverConfig,
    sign: f64,
) -> Result<PicardResult> {
    check_range("t", t, t > 0.0 && t.is_finite(), "t > 0")?;
    let prop = Propagator::new(config)?;
    let sp = prop.spectral();
    let u0 = sp.forward(theta0)?;
    let m = config.picard.nodes;
    let nodes: Vec<f64> = (0..m)
        .map(|i| 0.5 * t * (1.0 - (PI * i as f64 / (m - 1) as f64).cos()))
        .collect();
    let bary: Vec<f64> = (0..m)
        .map(|i| {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            if i == 0 || i == m - 1 {
                0.5 * s
            } else {
                s
            }
        })
        .collect();
    let grids: Vec<Option<TimeGrid>> = nodes
        .iter()
        .map(|&tau| (tau > 0.0).then(|| TimeGrid::new(0.0, tau, 0.0, 0.0, resolution)).transpose())
        .collect::<Result<_>>()?;

    let mut iterate: Vec<SpectralField> = nodes.iter().map(|&tau| prop.linear(&u0, tau)).collect();
    let mut physical: Vec<RealField> = iterate.iter().map(|u| sp.inverse(u)).collect();
    let mut distances = Vec::new();

    for _ in 0..n_iter {
        let forcing: Vec<SpectralField> = iterate.iter().map(|u| prop.nonlinear(u)).collect::<Result<_>>()?;
        let mut next = Vec::with_capacity(m);
        for (k, &tau) in nodes.iter().enumerate() {
            let mut acc = prop.linear(&u0, tau).into_coeffs();
            if let Some(grid) = &grids[k] {
                for (&s, &w) in grid.nodes().iter().zip(grid.weights()) {
                    let ell = lagrange_weights(&nodes, &bary, s);
                    for (idx, out) in acc.iter_mut().enumerate() {
                        let mut f = Complex64::new(0.0, 0.0);
                        for (l, g) in ell.iter().zip(&forcing) {
                            if *l != 0.0 {
                                f += g.coeffs()[idx] * *l;
                            }
                        }
                        *out += f * (sign * w * (-(tau - s) * prop.lambda[idx]).exp());
                    }
                }
            }
            next.push(SpectralField::new(*sp.grid(), acc)?);
        }
        let next_physical: Vec<RealField> = next.iter().map(|u| sp.inverse(u)).collect();
        let mut dist: f64 = 0.0;
        for (a, b) in next_physical.iter().zip(&physical) {
            let d = a.zip_with(b, |x, y| (x - y).abs())?.max_abs();
            dist = dist.max(d);
        }
        if !dist.is_finite() {
            return Err(Error::PicardDivergence { distances });
        }
        distances.push(dist);
        iterate = next;
        physical = next_physical;
        if dist < config.picard.tol {
            break;
        }
    }

    let converged = distances.last().is_some_and(|&d| d < config.picard.tol);
    if !converged && distances.len() >= 3 {
        let tail = &distances[distances.len() - 3..];
        if !(tail[0] > tail[1] && tail[1] > tail[2]) {
            return Err(Error::PicardDivergence { distances });
        }
    }
    Ok(PicardResult {
        theta: physical.pop().expect("at least two nodes"),
        distances,
    })
}

/// Lagrange basis values at `s` via the barycentric formula.
fn lagrange_weights(nodes: &[f64], bary: &[f64], s: f64) -> Vec<f64> {
    if let Some(j) = nodes.iter().position(|&x| x == s) {
        let mut e = vec![0.0; nodes.len()];
        e[j] = 1.0;
        return e;
    }
    let terms: Vec<f64> = nodes.iter().zip(bary).map(|(x, w)| w / (s - x)).collect();
    let total: f64 = terms.iter().sum();
    terms.into_iter().map(|v| v / total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn barycentric_weights_reproduce_polynomials() {
        let m = 7;
        let nodes: Vec<f64> = (0..m).map(|i| 0.5 * (1.0 - (PI * i as f64 / 6.0).cos())).collect();
        let bary: Vec<f64> = (0..m)
            .map(|i| {
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                if i == 0 || i == m - 1 { 0.5 * s } else { s }
            })
            .collect();
        for &s in &[0.13, 0.5, 0.77, nodes[3]] {
            let ell = lagrange_weights(&nodes, &bary, s);
            let p: f64 = ell.iter().zip(&nodes).map(|(l, x)| l * x.powi(6)).sum();
            assert!((p - s.powi(6)).abs() < 1e-14);
        }
    }
}
