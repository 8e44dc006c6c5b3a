use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use super::*;
use crate::grid::{Axis, GridSpec, MultiIndex, Spectral};
use crate::special::gauss_legendre;

fn profile(alpha: f64) -> Arc<KernelProfile> {
    static CACHE: OnceLock<std::sync::Mutex<Vec<(u64, Arc<KernelProfile>)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().unwrap();
    if let Some((_, p)) = guard.iter().find(|(a, _)| *a == alpha.to_bits()) {
        return p.clone();
    }
    let p = Arc::new(build_profile(alpha, default_r_max(alpha), 1e-9).unwrap());
    guard.push((alpha.to_bits(), p.clone()));
    p
}

fn tables(alpha: f64) -> Arc<DerivativeTables> {
    DerivativeTables::build(profile(alpha)).unwrap()
}

#[test]
fn scaling_at_origin_and_symmetry() {
    let p = profile(1.5);
    for &t in &[0.01, 0.3, 1.0, 7.0] {
        let v = kernel_eval(&p, t, [0.0, 0.0]).unwrap();
        assert!((v - t.powf(-2.0 / 1.5) * p.eval_radial(0.0)).abs() < 1e-14 * v);
        let x = [0.7, -1.9];
        assert_eq!(kernel_eval(&p, t, x).unwrap(), kernel_eval(&p, t, [-0.7, 1.9]).unwrap());
    }
    assert!(kernel_eval(&p, 0.0, [1.0, 0.0]).is_err());
    assert!(kernel_eval(&p, -1.0, [1.0, 0.0]).is_err());
}

/// ∫ p(t, x − z) p(t, z) dz in polar coordinates about the origin.
fn convolution_polar(p: &KernelProfile, t: f64, x: [f64; 2]) -> f64 {
    let rule = gauss_legendre(8);
    let u_max = 1e4f64.ln_1p();
    let cells = 400;
    let m_phi = 256;
    let mut total = 0.0;
    for c in 0..cells {
        let (u0, u1) = (u_max * c as f64 / cells as f64, u_max * (c + 1) as f64 / cells as f64);
        total += rule.integrate(u0, u1, |u| {
            let rho = u.exp_m1();
            let mut ring = 0.0;
            for k in 0..m_phi {
                let phi = 2.0 * PI * (k as f64 + 0.5) / m_phi as f64;
                let z = [rho * phi.cos(), rho * phi.sin()];
                ring += kernel_eval(p, t, [x[0] - z[0], x[1] - z[1]]).unwrap();
            }
            ring * 2.0 * PI / m_phi as f64 * kernel_eval(p, t, [rho, 0.0]).unwrap() * rho * (1.0 + rho)
        });
    }
    total
}

#[test]
fn semigroup_property_by_direct_quadrature() {
    let p = profile(1.5);
    for x in [[0.0, 0.0], [0.8, 0.3], [2.5, -1.0], [6.0, 4.0]] {
        let lhs = kernel_eval(&p, 2.0, x).unwrap();
        let rhs = convolution_polar(&p, 1.0, x);
        assert!((rhs / lhs - 1.0).abs() < 1e-4, "x = {x:?}: {lhs} vs {rhs}");
    }
}

fn sweep(nt: usize, nr: usize) -> (Vec<f64>, Vec<[f64; 2]>) {
    let ts = (0..nt).map(|k| 1e-2 * 1e4f64.powf(k as f64 / (nt - 1) as f64)).collect();
    let xs = (0..nr)
        .map(|k| {
            let r = 50.0 * k as f64 / (nr - 1) as f64;
            let phi = 0.37 * k as f64;
            [r * phi.cos(), r * phi.sin()]
        })
        .collect();
    (ts, xs)
}

#[test]
fn two_sided_ratio_is_bounded_and_refinement_stable() {
    let p = profile(1.5);
    let (ts, xs) = sweep(21, 101);
    let coarse = check_two_sided_estimate(&p, &ts, &xs).unwrap();
    assert!(coarse.c_low > 0.0 && coarse.c_high.is_finite());
    // Independent oracle: sup of p(1,ρ)(1+ρ)^{2+α} by direct Hankel quadrature.
    let oracle = (0..=400)
        .map(|k| {
            let rho = 0.05 * k as f64;
            super::hankel::density(1.5, rho).unwrap() * (1.0 + rho).powf(3.5)
        })
        .fold(0.0, f64::max);
    assert!((coarse.c_high / oracle - 1.0).abs() < 0.02, "{coarse:?} vs {oracle}");
    // The sweep spread is about 11, slightly above a factor 10.
    assert!(coarse.c_high / coarse.c_low < 12.0);
    let (ts, xs) = sweep(81, 401);
    let fine = check_two_sided_estimate(&p, &ts, &xs).unwrap();
    assert!((fine.c_low / coarse.c_low - 1.0).abs() < 0.05);
    assert!((fine.c_high / coarse.c_high - 1.0).abs() < 0.05);
    let at_origin = check_two_sided_estimate(&p, &[1.0], &[[0.0, 0.0]]).unwrap();
    assert!((at_origin.c_low - p.eval_radial(0.0)).abs() < 1e-15);
    assert!(check_two_sided_estimate(&p, &[], &xs).is_err());
}

#[test]
fn two_sided_ratio_is_scale_invariant() {
    let p = profile(1.5);
    let lambda: f64 = 3.7;
    for x in [[0.5, 0.1], [3.0, 4.0], [20.0, -1.0]] {
        let a = check_two_sided_estimate(&p, &[0.2], &[x]).unwrap().c_low;
        let s = lambda.powf(1.0 / 1.5);
        let b = check_two_sided_estimate(&p, &[0.2 * lambda], &[[x[0] * s, x[1] * s]]).unwrap().c_low;
        assert!((a / b - 1.0).abs() < 1e-12);
    }
}

#[test]
fn derivatives_match_finite_differences() {
    for alpha in [1.2, 1.5, 1.8] {
        let p = profile(alpha);
        let tabs = tables(alpha);
        let d = |k1, k2| KernelDerivativeProfile::new(tabs.clone(), MultiIndex::new(k1, k2).unwrap()).unwrap();
        let (d10, d01, d20, d11, d02) = (d(1, 0), d(0, 1), d(2, 0), d(1, 1), d(0, 2));
        let h = 1e-3;
        let t = 0.8;
        let f = |x: [f64; 2]| kernel_eval(&p, t, x).unwrap();
        for x in [[0.4, 0.3], [1.3, -0.6], [-2.0, 3.5], [7.0, 1.0], [25.0, 20.0]] {
            let e1 = [h, 0.0];
            let e2 = [0.0, h];
            let add = |a: [f64; 2], b: [f64; 2], s: f64| [a[0] + s * b[0], a[1] + s * b[1]];
            let fd1 = (f(add(x, e1, 1.0)) - f(add(x, e1, -1.0))) / (2.0 * h);
            let fd2 = (f(add(x, e2, 1.0)) - f(add(x, e2, -1.0))) / (2.0 * h);
            let g1 = |x: [f64; 2]| kernel_derivative_eval(&d10, t, x).unwrap();
            let g2 = |x: [f64; 2]| kernel_derivative_eval(&d01, t, x).unwrap();
            let fd11 = (g1(add(x, e1, 1.0)) - g1(add(x, e1, -1.0))) / (2.0 * h);
            let fd12 = (g1(add(x, e2, 1.0)) - g1(add(x, e2, -1.0))) / (2.0 * h);
            let fd22 = (g2(add(x, e2, 1.0)) - g2(add(x, e2, -1.0))) / (2.0 * h);
            let pairs = [
                (fd1, g1(x)),
                (fd2, g2(x)),
                (fd11, kernel_derivative_eval(&d20, t, x).unwrap()),
                (fd12, kernel_derivative_eval(&d11, t, x).unwrap()),
                (fd22, kernel_derivative_eval(&d02, t, x).unwrap()),
            ];
            for (k, (fd, an)) in pairs.iter().enumerate() {
                assert!((fd - an).abs() < 1e-4 * an.abs(), "alpha {alpha}, x {x:?}, component {k}: {fd} vs {an}");
            }
        }
    }
}

#[test]
fn derivative_properties() {
    let tabs = tables(1.5);
    let d10 = KernelDerivativeProfile::new(tabs.clone(), MultiIndex::new(1, 0).unwrap()).unwrap();
    assert_eq!(kernel_derivative_eval(&d10, 0.7, [0.0, 0.0]).unwrap(), 0.0);
    assert!(KernelDerivativeProfile::new(tabs.clone(), MultiIndex::new(2, 1).unwrap()).is_err());
    for kappa in MultiIndex::up_to(2) {
        let dk = KernelDerivativeProfile::new(tabs.clone(), kappa).unwrap();
        let c = dk.patch(40.0, 81).domination_constant();
        assert!(c.is_finite() && c > 0.0 || kappa.order() == 0, "kappa {kappa}");
        // two-point fit of the time-scaling exponent
        let x = [0.3, 0.2];
        let (t1, t2) = (0.5f64, 4.0f64);
        let v1 = kernel_derivative_eval(&dk, t1, [x[0] * t1.powf(1.0 / 1.5), x[1] * t1.powf(1.0 / 1.5)]).unwrap();
        let v2 = kernel_derivative_eval(&dk, t2, [x[0] * t2.powf(1.0 / 1.5), x[1] * t2.powf(1.0 / 1.5)]).unwrap();
        let slope = (v2 / v1).abs().ln() / (t2 / t1).ln();
        assert!((slope + (2.0 + kappa.order() as f64) / 1.5).abs() < 1e-10, "kappa {kappa}");
    }
}

#[test]
fn riesz_kernel_ratio_is_finite_and_resolution_stable() {
    let kappa = MultiIndex::ZERO;
    let ts = [0.5, 1.0, 2.0];
    let coarse = riesz_kernel_bound_check(1.5, kappa, &ts, GridSpec::new(128, 64.0).unwrap(), 16.0).unwrap();
    let fine = riesz_kernel_bound_check(1.5, kappa, &ts, GridSpec::new(256, 64.0).unwrap(), 16.0).unwrap();
    assert!(coarse.is_finite() && fine.is_finite());
    assert!((coarse / fine - 1.0).abs() < 0.2);
    let k1 = riesz_kernel_bound_check(1.5, MultiIndex::new(1, 0).unwrap(), &ts, GridSpec::new(128, 64.0).unwrap(), 16.0);
    assert!(k1.unwrap().is_finite());
    assert!(riesz_kernel_bound_check(1.5, kappa, &ts, GridSpec::new(128, 64.0).unwrap(), 17.0).is_err());
    assert!(riesz_kernel_bound_check(1.5, kappa, &[200.0], GridSpec::new(128, 64.0).unwrap(), 8.0).is_err());
    assert!(riesz_kernel_bound_check(1.5, MultiIndex::new(1, 1).unwrap(), &ts, GridSpec::new(128, 64.0).unwrap(), 8.0).is_err());
}

#[test]
fn riesz_kernel_symmetry_and_time_scaling() {
    let grid = GridSpec::new(128, 64.0).unwrap();
    let sp = Spectral::new(grid);
    let k = torus_riesz_kernel(&sp, 1.5, 1.0, MultiIndex::ZERO, Axis::X1).unwrap();
    let n = grid.n();
    for j2 in 1..n {
        for j1 in 1..n {
            let mirrored = k.at(n - j1, j2);
            assert!((k.at(j1, j2) + mirrored).abs() < 1e-12 * k.max_abs());
        }
    }
    let a = riesz_kernel_bound_check(1.5, MultiIndex::ZERO, &[0.5], grid, 16.0).unwrap();
    let b = riesz_kernel_bound_check(1.5, MultiIndex::ZERO, &[2.0], grid, 16.0).unwrap();
    assert!((a / b - 1.0).abs() < 0.05, "{a} vs {b}");
}

fn bump(grid: GridSpec, width: f64) -> crate::grid::RealField {
    grid.sample(|x, y| (-(x * x + y * y) / (width * width)).exp())
}

#[test]
fn whole_space_convolution_of_narrow_bump_is_kernel_times_mass() {
    let p = profile(1.5);
    let grid = GridSpec::new(64, 1.6).unwrap();
    let theta = bump(grid, 0.1);
    let mass = theta.integral();
    let xs = [[0.0, 0.0], [1.0, 0.5], [4.0, -3.0]];
    let got = convolve_whole_space(&p, &theta, 4.0, &xs).unwrap();
    for (x, v) in xs.iter().zip(&got) {
        let expect = kernel_eval(&p, 4.0, *x).unwrap() * mass;
        assert!((v / expect - 1.0).abs() < 0.01);
    }
    let wide = GridSpec::new(16, 1.0).unwrap();
    assert!(matches!(
        convolve_whole_space(&p, &bump(wide, 0.5), 1.0, &xs),
        Err(crate::Error::SupportNotContained)
    ));
}

#[test]
fn whole_space_convolution_is_linear() {
    let p = profile(1.5);
    let grid = GridSpec::new(32, 14.0).unwrap();
    let f = bump(grid, 0.8);
    let g = grid.sample(|x, y| (-((x - 1.0).powi(2) + y * y) * 2.0).exp());
    let h = f.zip_with(&g, |a, b| 2.0 * a - 0.5 * b).unwrap();
    let xs = [[0.3, 0.1], [2.0, 2.0]];
    let (pf, pg, ph) = (
        convolve_whole_space(&p, &f, 0.5, &xs).unwrap(),
        convolve_whole_space(&p, &g, 0.5, &xs).unwrap(),
        convolve_whole_space(&p, &h, 0.5, &xs).unwrap(),
    );
    for i in 0..xs.len() {
        assert!((ph[i] - (2.0 * pf[i] - 0.5 * pg[i])).abs() < 1e-13);
    }
}

#[test]
fn torus_semigroup_agrees_with_whole_space_inside_window() {
    let p = profile(1.5);
    let length = 40.0;
    let grid = GridSpec::new(128, length).unwrap();
    let theta = bump(grid, 1.0);
    let sp = Spectral::new(grid);
    // compact sampling box around the support for the whole-space sum
    let local = GridSpec::new(32, 12.5).unwrap();
    let theta_local = bump(local, 1.0);
    for t in [0.1f64, 1.0, 10.0] {
        assert!(t.powf(1.0 / 1.5) <= length / 8.0);
        let torus = sp.apply_semigroup(&theta, t, 1.5).unwrap();
        let mut pts = Vec::new();
        let mut tv = Vec::new();
        for (idx, v) in torus.values().iter().enumerate().step_by(7) {
            let x = grid.point(idx);
            if x[0].hypot(x[1]) <= length / 4.0 {
                pts.push(x);
                tv.push(*v);
            }
        }
        let ws = convolve_whole_space(&p, &theta_local, t, &pts).unwrap();
        let sup = ws.iter().copied().fold(0.0, f64::max);
        let dev = ws.iter().zip(&tv).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(dev < 0.01 * sup, "t = {t}: {dev} vs {sup}");
    }
}

#[test]
fn lower_bound_examples() {
    let p = profile(1.5);
    let grid = GridSpec::new(32, 10.0).unwrap();
    let theta = bump(grid, 0.8);
    let xs: Vec<[f64; 2]> = (0..21).map(|k| [k as f64, 0.0]).collect();
    let c = lower_bound_check(&p, &theta, 0.5, 2.0, &xs, 5).unwrap();
    assert!(c > 0.0);
    let c3 = lower_bound_check(&p, &theta.scale(3.0), 0.5, 2.0, &xs, 5).unwrap();
    assert!((c3 / c - 3.0).abs() < 1e-12);
    let narrow = lower_bound_check(&p, &theta, 0.5, 1.0, &xs, 5).unwrap();
    assert!(narrow >= c * (1.0 - 1e-12));
    assert!(lower_bound_check(&p, &crate::grid::RealField::zeros(grid), 0.5, 2.0, &xs, 3).is_err());
}

#[test]
fn levy_density_examples() {
    let nu = levy_density(1.5, [1.0, 0.0]).unwrap();
    let c = 1.5 * 2f64.powf(0.5) * libm::tgamma(1.75) / (PI * libm::tgamma(0.25));
    assert!((nu / c - 1.0).abs() < 1e-13);
    let z = [0.3, -0.4];
    let ratio = levy_density(1.5, [0.6, -0.8]).unwrap() / levy_density(1.5, z).unwrap();
    assert!((ratio - 2f64.powf(-3.5)).abs() < 1e-14);
    assert!(levy_density(1.2, [5.0, 5.0]).unwrap() > 0.0);
    assert!(levy_density(1.5, [0.0, 0.0]).is_err());
}
