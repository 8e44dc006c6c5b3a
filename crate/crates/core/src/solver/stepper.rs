use num_complex::Complex64;

use super::{picard_iterate, DiagnosticRecord, Propagator, Scheme, SimulationState, SolverConfig};
use crate::error::{check_range, Error, Result};
use crate::grid::{RealField, SpectralField};

/// Immutable copy of the field at a requested time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub theta: RealField,
}

#[derive(Debug, Clone)]
pub struct SimulationOutput {
    pub snapshots: Vec<Snapshot>,
    pub records: Vec<DiagnosticRecord>,
}

impl SimulationOutput {
    pub fn snapshot_at(&self, t: f64) -> Option<&Snapshot> {
        self.snapshots.iter().find(|s| (s.t - t).abs() <= 1e-12 * t.abs().max(1.0))
    }
}

fn combine(terms: &[(Complex64, &SpectralField)], weights: impl Fn(usize) -> [f64; 4]) -> SpectralField {
    let grid = *terms[0].1.grid();
    let coeffs = (0..grid.len())
        .map(|idx| {
            let w = weights(idx);
            terms.iter().zip(w).fold(Complex64::new(0.0, 0.0), |acc, ((c, f), wi)| acc + c * wi * f.coeffs()[idx])
        })
        .collect();
    SpectralField::new(grid, coeffs).expect("shape preserved")
}

/// One Lawson (integrating-factor) RK4 step of size `dt`.
///
/// With E = e^{−dt|ξ|^α/2}:
/// k1 = N(û), k2 = N(E(û + dt/2 k1)), k3 = N(Eû + dt/2 k2),
/// k4 = N(E²û + dt E k3), û' = E²û + dt/6 (E²k1 + 2E(k2 + k3) + k4).
pub fn step_ifrk4(state: &SimulationState, prop: &Propagator, dt: f64, cfl_safety: f64) -> Result<SimulationState> {
    check_range("dt", dt, dt > 0.0 && dt.is_finite(), "dt > 0")?;
    let u = &state.theta_hat;
    let sp = prop.spectral();
    if prop.nonlinear {
        let vmax = prop.max_velocity(u);
        if vmax > 0.0 {
            let max_dt = cfl_safety * sp.grid().dx() / vmax;
            if dt > max_dt * (1.0 + 1e-12) {
                return Err(Error::CflViolation { dt, max_dt });
            }
        }
    }
    let half: Vec<f64> = prop.lambda.iter().map(|l| (-0.5 * dt * l).exp()).collect();
    let full: Vec<f64> = prop.lambda.iter().map(|l| (-dt * l).exp()).collect();
    let one = Complex64::new(1.0, 0.0);
    let h = Complex64::new(0.5 * dt, 0.0);

    let k1 = prop.nonlinear(u)?;
    let a2 = combine(&[(one, u), (h, &k1)], |i| [half[i], half[i], 0.0, 0.0]);
    let k2 = prop.nonlinear(&a2)?;
    let a3 = combine(&[(one, u), (h, &k2)], |i| [half[i], 1.0, 0.0, 0.0]);
    let k3 = prop.nonlinear(&a3)?;
    let a4 = combine(&[(one, u), (Complex64::new(dt, 0.0), &k3)], |i| [full[i], half[i], 0.0, 0.0]);
    let k4 = prop.nonlinear(&a4)?;
    let c = Complex64::new(dt / 6.0, 0.0);
    let next = combine(&[(one, u), (c, &k1), (c * 2.0, &k2), (c * 2.0, &k3)], |i| {
        [full[i], full[i], half[i], half[i]]
    });
    let mut coeffs = next.into_coeffs();
    for (out, k) in coeffs.iter_mut().zip(k4.coeffs()) {
        *out += c * k;
    }
    let t = state.t + dt;
    if coeffs.iter().any(|v| !v.is_finite()) {
        return Err(Error::BlowUp { t });
    }
    let theta_hat = SpectralField::new(*sp.grid(), coeffs)?;
    let theta = sp.inverse(&theta_hat);
    Ok(SimulationState {
        t,
        theta,
        theta_hat,
        step_count: state.step_count + 1,
    })
}

pub fn run_simulation(config: &SolverConfig, theta0: &RealField) -> Result<SimulationOutput> {
    run_simulation_with(config, theta0, |_| {})
}

/// Runs to `t_end`, landing exactly on every snapshot time. The hook sees
/// the state after every step (and the initial state).
pub fn run_simulation_with(
    config: &SolverConfig,
    theta0: &RealField,
    mut hook: impl FnMut(&SimulationState),
) -> Result<SimulationOutput> {
    let prop = Propagator::new(config)?;
    if theta0.grid() != &config.grid {
        return Err(Error::ShapeMismatch {
            expected: config.grid.len(),
            got: theta0.grid().len(),
        });
    }
    let sp = prop.spectral();
    let theta_hat = sp.forward(theta0)?;
    let mut state = SimulationState {
        t: 0.0,
        theta: theta0.clone(),
        theta_hat,
        step_count: 0,
    };
    let mut out = SimulationOutput {
        snapshots: Vec::with_capacity(config.snapshot_times.len()),
        records: vec![prop.record(0.0, &state.theta, &state.theta_hat)?],
    };
    hook(&state);

    if config.scheme == Scheme::Picard {
        for &t in &config.snapshot_times {
            let theta = if t == 0.0 {
                theta0.clone()
            } else {
                picard_iterate(theta0, t, config.picard.n_iter, config.picard.resolution, config)?.theta
            };
            let hat = sp.forward(&theta)?;
            if t > 0.0 {
                out.records.push(prop.record(t, &theta, &hat)?);
            }
            out.snapshots.push(Snapshot { t, theta });
        }
        return Ok(out);
    }

    let mut stops = config.snapshot_times.iter().copied().peekable();
    while stops.peek() == Some(&0.0) {
        stops.next();
        out.snapshots.push(Snapshot {
            t: 0.0,
            theta: theta0.clone(),
        });
    }
    while let Some(&stop) = stops.peek().or(Some(&config.t_end)) {
        if state.t >= stop {
            break;
        }
        let mut dt = config.dt;
        if prop.nonlinear {
            let vmax = prop.max_velocity(&state.theta_hat);
            if vmax > 0.0 {
                dt = dt.min(config.cfl_safety * config.grid.dx() / vmax);
            }
        }
        let remaining = stop - state.t;
        let landing = remaining <= dt * (1.0 + 1e-9);
        if landing {
            dt = remaining;
        }
        let mut next = step_ifrk4(&state, &prop, dt, config.cfl_safety)?;
        if landing {
            next.t = stop;
        }
        state = next;
        out.records.push(prop.record(state.t, &state.theta, &state.theta_hat)?);
        hook(&state);
        if landing && stops.peek() == Some(&stop) {
            stops.next();
            out.snapshots.push(Snapshot {
                t: stop,
                theta: state.theta.clone(),
            });
        }
    }
    Ok(out)
}
