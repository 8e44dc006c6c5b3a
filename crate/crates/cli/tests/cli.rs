use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn sqg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).expect("csv opens");
    r.records()
        .map(|rec| rec.expect("row").iter().map(str::to_string).collect())
        .collect()
}

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn linear_config(out: &Path) -> String {
    format!(
        r#"output_dir = "{}"

[solver]
alpha = 1.5
dt = 0.05
t_end = 10.0
n = 32
box_length = 24.0
nonlinear = false
snapshot_times = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0]

[initial_data]
kind = "gaussian"
amplitude = 1.0
widths = [1.5, 1.0]

[verification]
fit_range = [0.3, 10.0]
"#,
        out.display()
    )
}

#[test]
fn special_beta_half_half_is_pi() {
    let out = sqg(&["special", "beta", "0.5", "0.5"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let v: f64 = row[2].parse().unwrap();
    assert!((v - std::f64::consts::PI).abs() < 1e-13, "{v}");
}

#[test]
fn special_lemma_tech_ratio_is_bounded() {
    let tmp = TempDir::new().unwrap();
    let path = tmp.path().join("lt.csv");
    let out = sqg(&[
        "special",
        "lemma-tech",
        "--alpha",
        "1.5",
        "--beta",
        "1",
        "--count",
        "21",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows = read_csv(&path);
    assert_eq!(rows.len(), 21);
    for r in rows {
        let ratio: f64 = r[1].parse().unwrap();
        assert!(ratio > 0.05 && ratio < 20.0, "{ratio}");
    }
}

#[test]
fn special_tgamma_matches_beta_factor() {
    let out = sqg(&["special", "tgamma", "--gamma", "0.3", "--alpha", "1.5"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let vals: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    let (c, c_via, beta, measured, eta) = (vals[2], vals[3], vals[4], vals[5], vals[6]);
    assert!((c - c_via).abs() < 1e-6 * c);
    assert!((measured - beta).abs() < 1e-3 * beta, "{measured} vs {beta}");
    assert!((eta * c - 1.0).abs() < 1e-12);
}

#[test]
fn kernel_gaussian_endpoint_and_determinism() {
    let tmp = TempDir::new().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for dir in [&a, &b] {
        let out = sqg(&["kernel", "--alpha", "2", "--out", dir.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    let rows = read_csv(&a.join("kernel_a2_profile.csv"));
    let r0: f64 = rows[0][0].parse().unwrap();
    let p0: f64 = rows[0][1].parse().unwrap();
    assert_eq!(r0, 0.0);
    assert!((p0 - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-12, "{p0}");
    for f in ["kernel_a2.skpf", "kernel_a2_profile.csv", "kernel_a2_estimate.csv"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn kernel_stable_profile_has_unit_mass() {
    let tmp = TempDir::new().unwrap();
    let out = sqg(&["kernel", "--alpha", "1.5", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let mass: f64 = text.rsplit("mass = ").next().unwrap().trim().parse().unwrap();
    assert!((mass - 1.0).abs() < 1e-8, "{mass}");
    let sweep = read_csv(&tmp.path().join("kernel_a1.5_estimate.csv"));
    assert_eq!(sweep.len(), 21 * 51);
    assert!(sweep.iter().all(|r| r[3].parse::<f64>().unwrap() > 0.0));
}

#[test]
fn zero_data_gives_zero_snapshots() {
    let tmp = TempDir::new().unwrap();
    let run = tmp.path().join("run");
    let body = linear_config(&run)
        .replace("nonlinear = false", "nonlinear = true")
        .replace("amplitude = 1.0", "amplitude = 0.0");
    let cfg = write_config(tmp.path(), "zero.toml", &body);
    let out = sqg(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let data = sqg_core::io::read_run(&run).unwrap();
    assert_eq!(data.snapshots.len(), 6);
    for s in &data.snapshots {
        assert!(s.theta.values().iter().all(|v| *v == 0.0));
    }
}

#[test]
fn rerun_is_bit_identical() {
    let tmp = TempDir::new().unwrap();
    let body = r#"
[solver]
alpha = 1.4
dt = 0.01
t_end = 0.5
n = 32
box_length = 6.283185307179586
snapshot_times = [0.25, 0.5]

[initial_data]
kind = "random"
kmax = 4
"#;
    let cfg = write_config(tmp.path(), "rand.toml", body);
    let dirs = [tmp.path().join("r1"), tmp.path().join("r2"), tmp.path().join("r3")];
    let seeds = ["11", "11", "12"];
    for (dir, seed) in dirs.iter().zip(seeds) {
        let out = sqg(&[
            "simulate",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            dir.to_str().unwrap(),
            "--seed",
            seed,
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    for f in ["initial.sqgf", "snapshots/snap_0001.sqgf", "diagnostics.csv"] {
        let a = std::fs::read(dirs[0].join(f)).unwrap();
        assert_eq!(a, std::fs::read(dirs[1].join(f)).unwrap(), "{f}");
        assert_ne!(a, std::fs::read(dirs[2].join(f)).unwrap(), "{f}");
    }
}

#[test]
fn linear_run_passes_ratio_checks_with_zero_deviation() {
    let tmp = TempDir::new().unwrap();
    let run = tmp.path().join("lin");
    let cfg = write_config(tmp.path(), "lin.toml", &linear_config(&run));
    assert_eq!(code(&sqg(&["simulate", "--config", cfg.to_str().unwrap()])), 0);
    let out = sqg(&[
        "verify",
        run.to_str().unwrap(),
        "--checks",
        "ratio,max_principle,mass",
    ]);
    assert_eq!(code(&out), 0, "{}{}", stdout(&out), stderr(&out));
    assert!(stdout(&out).contains("PASS"));
    let report = read_csv(&run.join("report.csv"));
    let ratio = report.iter().find(|r| r[0] == "ratio").unwrap();
    assert!(ratio[1].parse::<f64>().unwrap() < 1e-10, "{ratio:?}");
    assert_eq!(ratio[3], "true");
}

#[test]
fn failing_check_exits_with_one() {
    // Linear decay of integrable data follows −2/α, not the critical rate.
    let tmp = TempDir::new().unwrap();
    let run = tmp.path().join("lin");
    let cfg = write_config(tmp.path(), "lin.toml", &linear_config(&run));
    assert_eq!(code(&sqg(&["simulate", "--config", cfg.to_str().unwrap()])), 0);
    let out = sqg(&["verify", run.to_str().unwrap(), "--checks", "slope"]);
    assert_eq!(code(&out), 1, "{}", stdout(&out));
    assert!(stdout(&out).contains("FAIL"));

    let fit = sqg(&[
        "fit",
        run.join("diagnostics.csv").to_str().unwrap(),
        "--alpha",
        "1.5",
        "--range",
        "0.3",
        "10",
    ]);
    assert_eq!(code(&fit), 1);
}

#[test]
fn missing_snapshot_is_named() {
    let tmp = TempDir::new().unwrap();
    let run = tmp.path().join("lin");
    let cfg = write_config(tmp.path(), "lin.toml", &linear_config(&run));
    assert_eq!(code(&sqg(&["simulate", "--config", cfg.to_str().unwrap()])), 0);
    std::fs::remove_file(run.join("snapshots/snap_0002.sqgf")).unwrap();
    let out = sqg(&["verify", run.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("snap_0002.sqgf"), "{}", stderr(&out));
}

#[test]
fn profile_alpha_mismatch_is_an_error() {
    let tmp = TempDir::new().unwrap();
    let run = tmp.path().join("lin");
    let cfg = write_config(tmp.path(), "lin.toml", &linear_config(&run));
    assert_eq!(code(&sqg(&["simulate", "--config", cfg.to_str().unwrap()])), 0);
    assert_eq!(code(&sqg(&["kernel", "--alpha", "2", "--out", tmp.path().to_str().unwrap()])), 0);
    let profile = tmp.path().join("kernel_a2.skpf");
    let out = sqg(&[
        "verify",
        run.to_str().unwrap(),
        "--checks",
        "two_sided",
        "--profile",
        profile.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("alpha mismatch"), "{}", stderr(&out));
}

#[test]
fn usage_and_config_errors_exit_with_two() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&sqg(&["kernel"])), 2);
    assert_eq!(code(&sqg(&["nonsense"])), 2);

    let bad = write_config(tmp.path(), "bad.toml", "[solver]\nalpha = \"x\"\n");
    let out = sqg(&["simulate", "--config", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line"), "{}", stderr(&out));

    let run = tmp.path().join("lin");
    let cfg = write_config(tmp.path(), "lin.toml", &linear_config(&run));
    assert_eq!(code(&sqg(&["simulate", "--config", cfg.to_str().unwrap()])), 0);
    let out = sqg(&["verify", run.to_str().unwrap(), "--checks", "bogus"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("bogus"));
}
