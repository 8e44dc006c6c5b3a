use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Subcommand;
use sqg_core::grid::{GridSpec, Spectral};
use sqg_core::io::{read_diagnostics, write_profile, write_run, RunConfig};
use sqg_core::kernel::{build_profile, default_r_max, kernel_eval};
use sqg_core::solver::run_simulation;
use sqg_core::special::{
    apply_t_gamma, beta, default_v_sweep, lemma_tech_sweep, singular_time_convolution, t_gamma_constants,
    Semigroup, TorusSemigroup, DEFAULT_JACOBI_NODES,
};
use sqg_core::verify::{decay_slope_fit, Quantity};

use crate::Failure;

fn create_dir(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Error(format!("{}: {e}", dir.display())))
}

fn csv_sink(out: Option<&Path>) -> Result<csv::Writer<Box<dyn Write>>, Failure> {
    let sink: Box<dyn Write> = match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                create_dir(dir)?;
            }
            Box::new(File::create(path).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))?)
        }
        None => Box::new(std::io::stdout()),
    };
    Ok(csv::Writer::from_writer(sink))
}

fn num(v: f64) -> String {
    format!("{v:e}")
}

pub fn kernel(alpha: f64, out: &Path, r_max: Option<f64>, tol: f64) -> Result<(), Failure> {
    let profile = build_profile(alpha, r_max.unwrap_or_else(|| default_r_max(alpha)), tol)?;
    create_dir(out)?;
    let stem = format!("kernel_a{alpha}");
    write_profile(&out.join(format!("{stem}.skpf")), &profile)?;

    let mut table = csv_sink(Some(&out.join(format!("{stem}_profile.csv"))))?;
    table.write_record(["r", "p"])?;
    for (r, p) in profile.radii().iter().zip(profile.values()) {
        table.write_record([num(*r), num(*p)])?;
    }
    table.flush()?;

    let mut sweep = csv_sink(Some(&out.join(format!("{stem}_estimate.csv"))))?;
    sweep.write_record(["t", "r", "p", "ratio"])?;
    for i in 0..=20 {
        let t = 1e-2 * 10f64.powf(i as f64 / 5.0);
        for j in 0..=50 {
            let r = j as f64;
            let p = kernel_eval(&profile, t, [r, 0.0])?;
            let ratio = p * (t.powf(1.0 / alpha) + r).powf(2.0 + alpha) / t;
            sweep.write_record([num(t), num(r), num(p), num(ratio)])?;
        }
    }
    sweep.flush()?;
    println!(
        "alpha {alpha}: {} radii up to {}, p(1,0) = {:.12e}, mass = {:.12}",
        profile.radii().len(),
        profile.r_max(),
        profile.values()[0],
        profile.mass()
    );
    Ok(())
}

pub fn simulate(config: &Path, out: Option<PathBuf>, seed: Option<u64>) -> Result<(), Failure> {
    let mut cfg = RunConfig::load(config)?;
    if let Some(dir) = out {
        cfg.output_dir = dir;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let base = config.parent().unwrap_or(Path::new("."));
    let theta0 = cfg.initial_field(base)?;
    let output = run_simulation(&cfg.solver_config()?, &theta0)?;
    write_run(&cfg.output_dir, &cfg, &theta0, &output)?;
    let last = output.records.last().expect("initial record");
    println!(
        "{} steps to t = {}, {} snapshots in {}; final linf {:.6e}, l2 {:.6e}",
        output.records.len() - 1,
        last.time,
        output.snapshots.len(),
        cfg.output_dir.display(),
        last.linf,
        last.l2
    );
    Ok(())
}

#[derive(Subcommand, Debug)]
pub enum Special {
    /// B(a, b).
    Beta { a: f64, b: f64 },
    /// ∫_0^t (t−s)^{−a}s^{−b} ds by product quadrature next to its closed form.
    Convolution { a: f64, b: f64, t: f64 },
    /// Ratio sweep of the two-sided asymptotic integral over v ∈ (0, 1).
    LemmaTech {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 41)]
        count: usize,
    },
    /// Constants of the weighted time-convolution operator T_γ.
    Tgamma {
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        alpha: f64,
    },
}

pub fn special(which: Special, out: Option<&Path>) -> Result<(), Failure> {
    let mut w = csv_sink(out)?;
    match which {
        Special::Beta { a, b } => {
            w.write_record(["a", "b", "beta"])?;
            w.write_record([num(a), num(b), format!("{:.15e}", beta(a, b)?)])?;
        }
        Special::Convolution { a, b, t } => {
            let value = singular_time_convolution(a, b, t)?;
            let exact = t.powf(1.0 - a - b) * beta(1.0 - b, 1.0 - a)?;
            w.write_record(["a", "b", "t", "quadrature", "closed_form"])?;
            w.write_record([num(a), num(b), num(t), format!("{value:.15e}"), format!("{exact:.15e}")])?;
        }
        Special::LemmaTech { alpha, beta, count } => {
            let sweep = lemma_tech_sweep(alpha, beta, &default_v_sweep(count))?;
            w.write_record(["v", "ratio"])?;
            for (v, r) in sweep.v.iter().zip(&sweep.ratio) {
                w.write_record([num(*v), num(*r)])?;
            }
            eprintln!("ratio range [{:.6e}, {:.6e}]", sweep.min, sweep.max);
        }
        Special::Tgamma { gamma, alpha } => {
            let c = t_gamma_constants(alpha, gamma, &default_v_sweep(41))?;
            // T_γ applied to a semigroup orbit should equal the Beta factor times P_t|θ0|.
            let grid = GridSpec::new(64, 20.0)?;
            let sg = TorusSemigroup::new(Spectral::new(grid), alpha)?;
            let theta = grid.sample(|x, y| (-(x * x + y * y) / 2.0).exp());
            let t = 1.0;
            let series = apply_t_gamma(|s| sg.apply(&theta, s), &[t], gamma, &sg, DEFAULT_JACOBI_NODES)?;
            let pt = sg.apply(&theta, t)?;
            let measured = series.fields[0].max() / pt.max();
            w.write_record([
                "alpha",
                "gamma",
                "c_gamma",
                "c_gamma_via_lemma",
                "beta_factor",
                "t_gamma_over_pt",
                "eta_threshold",
            ])?;
            w.write_record([
                num(alpha),
                num(gamma),
                num(c.c_gamma),
                num(c.c_gamma_via_lemma),
                num(c.beta_factor),
                num(measured),
                num(c.eta_threshold),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn fit(csv: &Path, quantity: &str, alpha: f64, range: Option<Vec<f64>>, tol: f64) -> Result<(), Failure> {
    let q = Quantity::parse(quantity)
        .ok_or_else(|| Failure::Error(format!("unknown quantity {quantity}; use l2, lcrit, linf or riesz_linf")))?;
    let records = read_diagnostics(csv)?;
    let t_end = records.last().map(|r| r.time).unwrap_or(0.0);
    let (t_a, t_b) = match range.as_deref() {
        Some([a, b]) => (*a, *b),
        _ => (t_end / 10f64.powf(1.5) * 0.97, t_end),
    };
    let f = decay_slope_fit(&records, q, alpha, t_a, t_b, tol)?;
    println!(
        "{}: slope {:.4} ± {:.4} over [{:.4e}, {:.4e}] ({} points), expected {:.4} ± {} -> {}",
        f.quantity,
        f.slope,
        f.slope_stderr,
        f.t_a,
        f.t_b,
        f.points,
        f.expected,
        f.tol,
        if f.passed() { "PASS" } else { "FAIL" }
    );
    if f.passed() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}
