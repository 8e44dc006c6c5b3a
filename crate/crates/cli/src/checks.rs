use std::path::Path;

use sqg_core::grid::{MultiIndex, RealField, Spectral};
use sqg_core::io::{read_profile, read_run, RunData};
use sqg_core::kernel::check_two_sided_estimate;
use sqg_core::verify::{
    decay_slope_fit, gradient_bound_diag, limit_scan, ratio_diagnostics, riesz_limit_check, summary_table,
    write_report_csv, Frame, Quantity, ScanMode, Verdict, Window,
};
use sqg_core::Error;

use crate::Failure;

pub const ALL_CHECKS: [&str; 9] = [
    "ratio",
    "limits",
    "gradient",
    "slope",
    "riesz_slope",
    "max_principle",
    "mass",
    "riesz_limits",
    "two_sided",
];

const LIMIT_THRESHOLD: f64 = 0.05;
const SLOPE_TOL: f64 = 0.05;
const STEP_TOL: f64 = 1e-6;

struct Context {
    run: RunData,
    spectral: Spectral,
    /// (t, θ(t), P_tθ0, P_t|θ0|) for every snapshot with t > 0.
    frames: Vec<(f64, RealField, RealField, RealField)>,
}

impl Context {
    fn load(dir: &Path) -> Result<Self, Error> {
        let run = read_run(dir)?;
        let alpha = run.config.solver.alpha;
        let spectral = Spectral::new(run.config.grid()?);
        let abs0 = run.theta0.abs();
        let mut frames = Vec::new();
        for s in run.snapshots.iter().filter(|s| s.t > 0.0) {
            let p = spectral.apply_semigroup(&run.theta0, s.t, alpha)?;
            let pa = spectral.apply_semigroup(&abs0, s.t, alpha)?;
            frames.push((s.t, s.theta.clone(), p, pa));
        }
        Ok(Self { run, spectral, frames })
    }

    fn alpha(&self) -> f64 {
        self.run.config.solver.alpha
    }

    fn window(&self) -> Window {
        Window::quarter_box(self.run.config.solver.box_length)
    }

    fn frame_refs(&self) -> Vec<Frame<'_>> {
        self.frames.iter().map(|(t, th, p, _)| (*t, th, p)).collect()
    }

    fn fit_range(&self) -> (f64, f64) {
        match self.run.config.verification.fit_range {
            Some([a, b]) => (a, b),
            None => {
                let t_end = self.run.config.solver.t_end;
                (t_end / 10f64.powf(1.5) * 0.97, t_end)
            }
        }
    }
}

fn ratio(ctx: &Context) -> Result<Verdict, Error> {
    let mut dev = 0.0f64;
    let mut ok = !ctx.frames.is_empty();
    for (t, th, p, _) in &ctx.frames {
        let d = ratio_diagnostics(th, p, *t, ctx.window())?;
        ok &= d.is_finite_positive();
        dev = dev.max(d.sup_abs_dev);
    }
    Ok(Verdict::new("ratio", dev, "sup/inf of θ/P_tθ0 finite and positive", ok))
}

fn limits(ctx: &Context) -> Result<Vec<Verdict>, Error> {
    let frames = ctx.frame_refs();
    let w = ctx.window();
    let small = limit_scan(&frames, ScanMode::TToZero, w, 5, LIMIT_THRESHOLD)?;
    let far = limit_scan(&frames, ScanMode::XToInf, w, 5, LIMIT_THRESHOLD)?;
    Ok(vec![
        Verdict::new(
            "limit_t_to_0",
            small.extreme,
            format!("minimum at smallest t and < {LIMIT_THRESHOLD}"),
            small.passed(),
        ),
        Verdict::new(
            "limit_x_to_inf",
            far.extreme,
            format!("nonincreasing over annuli and < {LIMIT_THRESHOLD}"),
            far.passed() && far.monotone(),
        ),
    ])
}

fn gradient(ctx: &Context) -> Result<Vec<Verdict>, Error> {
    let mut out = Vec::new();
    let frames: Vec<_> = ctx.frames.iter().filter(|f| f.0 >= 0.1).collect();
    if frames.is_empty() {
        return Err(Error::InsufficientData("gradient check needs snapshots with t ≥ 0.1".into()));
    }
    for kappa in MultiIndex::up_to(2) {
        let mut vals = Vec::with_capacity(frames.len());
        for (t, th, _, pa) in &frames {
            vals.push(gradient_bound_diag(&ctx.spectral, th, pa, kappa, *t, ctx.alpha(), ctx.window())?);
        }
        let mut sorted = vals.clone();
        sorted.sort_by(f64::total_cmp);
        let median = sorted[sorted.len() / 2];
        let worst = vals.iter().map(|v| (v / median).max(median / v)).fold(1.0, f64::max);
        out.push(Verdict::new(
            format!("gradient_{}{}", kappa.k1, kappa.k2),
            worst,
            "within a factor 2 of the median",
            worst.is_finite() && worst <= 2.0,
        ));
    }
    Ok(out)
}

fn slope(ctx: &Context, q: Quantity, name: &str) -> Result<Verdict, Error> {
    let (a, b) = ctx.fit_range();
    let f = decay_slope_fit(&ctx.run.records, q, ctx.alpha(), a, b, SLOPE_TOL)?;
    Ok(Verdict::new(
        name,
        f.slope,
        format!("{:.4} ± {}", f.expected, f.tol),
        f.passed(),
    ))
}

fn max_principle(ctx: &Context) -> Vec<Verdict> {
    let r = &ctx.run.records;
    let worst = |get: fn(&sqg_core::solver::DiagnosticRecord) -> f64| {
        r.windows(2)
            .map(|w| (get(&w[1]) - get(&w[0])) / get(&w[0]).max(f64::MIN_POSITIVE))
            .fold(0.0f64, f64::max)
    };
    let linf = worst(|d| d.linf);
    let l2 = worst(|d| d.l2);
    vec![
        Verdict::new("max_principle_linf", linf, format!("relative increase ≤ {STEP_TOL}"), linf <= STEP_TOL),
        Verdict::new("max_principle_l2", l2, format!("relative increase ≤ {STEP_TOL}"), l2 <= STEP_TOL),
    ]
}

fn mass(ctx: &Context) -> Verdict {
    let r = &ctx.run.records;
    let m0 = r.first().map_or(0.0, |d| d.mean);
    let scale = r.first().map_or(1.0, |d| d.linf.max(f64::MIN_POSITIVE));
    let drift = r.iter().map(|d| (d.mean - m0).abs() / scale).fold(0.0, f64::max);
    Verdict::new("mass", drift, "mean drift ≤ 1e-10 relative to ‖θ0‖_∞", drift <= 1e-10)
}

fn riesz_limits(ctx: &Context) -> Result<Verdict, Error> {
    let l = riesz_limit_check(&ctx.run.records, ctx.alpha())?;
    Ok(Verdict::new(
        "riesz_limits",
        l.first.max(l.last) / l.peak,
        "scaled ‖Rθ‖_∞ smaller at both ends than at its peak",
        l.passed(),
    ))
}

fn two_sided(ctx: &Context, profile: Option<&Path>) -> Result<Verdict, Failure> {
    let path = profile.ok_or_else(|| Failure::Error("two_sided needs --profile".into()))?;
    let profile = read_profile(path)?;
    if profile.alpha() != ctx.alpha() {
        return Err(Error::AlphaMismatch {
            run: ctx.alpha(),
            profile: profile.alpha(),
        }
        .into());
    }
    let ts: Vec<f64> = (0..=20).map(|i| 1e-2 * 10f64.powf(i as f64 / 5.0)).collect();
    let xs: Vec<[f64; 2]> = (0..=50).map(|j| [j as f64, 0.0]).collect();
    let b = check_two_sided_estimate(&profile, &ts, &xs)?;
    Ok(Verdict::new(
        "two_sided",
        b.c_high / b.c_low,
        "0 < inf ≤ sup < ∞",
        b.c_low > 0.0 && b.c_high.is_finite(),
    ))
}

pub fn verify(
    run_dir: &Path,
    checks: Option<Vec<String>>,
    profile: Option<&Path>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let ctx = Context::load(run_dir)?;
    let mut names = checks.unwrap_or_else(|| ctx.run.config.verification.checks.clone());
    if names.is_empty() {
        names = ALL_CHECKS
            .iter()
            .filter(|c| **c != "two_sided" || profile.is_some())
            .map(|c| c.to_string())
            .collect();
    }
    let mut rows = Vec::new();
    for name in &names {
        match name.as_str() {
            "ratio" => rows.push(ratio(&ctx)?),
            "limits" => rows.extend(limits(&ctx)?),
            "gradient" => rows.extend(gradient(&ctx)?),
            "slope" => rows.push(slope(&ctx, Quantity::Linf, "slope_linf")?),
            "riesz_slope" => rows.push(slope(&ctx, Quantity::RieszLinf, "slope_riesz_linf")?),
            "max_principle" => rows.extend(max_principle(&ctx)),
            "mass" => rows.push(mass(&ctx)),
            "riesz_limits" => rows.push(riesz_limits(&ctx)?),
            "two_sided" => rows.push(two_sided(&ctx, profile)?),
            other => {
                return Err(Failure::Error(format!(
                    "unknown check {other}; available: {}",
                    ALL_CHECKS.join(", ")
                )))
            }
        }
    }
    let report = out.unwrap_or(run_dir).join("report.csv");
    write_report_csv(&report, &rows)?;
    print!("{}", summary_table(&rows));
    if rows.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}
