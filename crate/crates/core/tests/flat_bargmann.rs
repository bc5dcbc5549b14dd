use crownheat::flat::*;
use crownheat::C64;
use proptest::prelude::*;

fn hermite(n: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, 2.0 * x);
    if n == 0 {
        return p0;
    }
    for k in 1..n {
        let p2 = 2.0 * x * p1 - 2.0 * k as f64 * p0;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// (degree, width, centre)
const FAMILY: [(usize, f64, f64); 10] = [
    (0, 1.0, 0.0),
    (0, 0.6, 0.8),
    (0, 1.5, -1.0),
    (1, 1.0, 0.0),
    (1, 0.8, 0.5),
    (2, 1.0, 0.0),
    (2, 1.2, -0.5),
    (3, 0.9, 0.3),
    (3, 1.4, 0.0),
    (1, 0.7, -0.9),
];

fn member(t: f64, (n, a, c): (usize, f64, f64)) -> LineFunction {
    LineFunction::sample_default(t, move |x| {
        let u = (x - c) / a;
        hermite(n, u) * (-0.5 * u * u).exp()
    })
}

fn bargmann_grid(t: f64, (n, a, c): (usize, f64, f64)) -> StripGrid {
    let s = 0.5 * a * a;
    let big_t = s + t;
    let poly = 1.0 + 0.25 * n as f64;
    let x_max = c.abs() + 9.0 * big_t.sqrt() * poly;
    let y_sd = (t * big_t / s).sqrt();
    let y_max = 9.0 * y_sd * poly;
    let dx = 0.3 * big_t.sqrt().min(a) / poly;
    let dy = 0.3 * y_sd.min(a) / poly;
    let nx = (2.0 * x_max / dx).ceil() as usize | 1;
    let ny = (2.0 * y_max / dy).ceil() as usize | 1;
    StripGrid::uniform(x_max, nx, y_max, ny)
}

#[test]
fn bargmann_isometry_on_hermite_family() {
    for &t in &[0.1, 0.5, 2.0] {
        for &m in &FAMILY {
            let f = member(t, m);
            let big_f = flat_transform(&f, t, &bargmann_grid(t, m)).unwrap();
            let norm = flat_bargmann_norm(&big_f, t).unwrap();
            let gap = (norm - f.norm_sq()).abs() / f.norm_sq();
            assert!(gap < 1e-5, "t={t} member={m:?} gap={gap:e}");
        }
    }
}

#[test]
fn unit_gaussian_has_unit_bargmann_norm() {
    let t = 0.5;
    // ∫ e^{−x²} dx = √π
    let f = LineFunction::sample_default(t, |x| (-0.5 * x * x).exp() / std::f64::consts::PI.powf(0.25));
    let big_f = flat_transform(&f, t, &bargmann_grid(t, (0, 1.0, 0.0))).unwrap();
    assert!((flat_bargmann_norm(&big_f, t).unwrap() - 1.0).abs() < 1e-5);
}

#[test]
fn heat_bump_norm_two_ways() {
    let (s, t) = (0.25, 0.5);
    let f = LineFunction::sample_default(t, |x| flat_heat_kernel(s, x));
    let closed = 1.0 / (2.0 * (2.0 * std::f64::consts::PI * s).sqrt());
    assert!((f.norm_sq() - closed).abs() < 1e-12 * closed);
    let big_f = flat_transform(&f, t, &bargmann_grid(t, (0, (2.0 * s).sqrt(), 0.0))).unwrap();
    let via_bargmann = flat_bargmann_norm(&big_f, t).unwrap();
    assert!((via_bargmann - closed).abs() < 1e-6 * closed);
}

#[test]
fn zero_function_has_zero_transform_and_norm() {
    let f = LineFunction::sample_default(1.0, |_| 0.0);
    let big_f = flat_transform(&f, 1.0, &StripGrid::uniform(3.0, 11, 2.0, 9)).unwrap();
    assert!(big_f.values.iter().all(|v| v.norm() == 0.0));
    assert_eq!(flat_bargmann_norm(&big_f, 1.0).unwrap(), 0.0);
}

#[test]
fn semigroup_on_the_strip() {
    let (s, t) = (0.3, 0.7);
    let f = LineFunction::sample_default(t, |x| flat_heat_kernel(s, x));
    let big_f = flat_transform(&f, t, &StripGrid::uniform(4.0, 17, 2.0, 9)).unwrap();
    for (k, v) in big_f.values.iter().enumerate() {
        let z = C64::new(big_f.grid.xs[k % 17], big_f.grid.ys[k / 17]);
        let exact = flat_heat_kernel_c(s + t, z);
        assert!((v - exact).norm() < 1e-6 * exact.norm());
    }
}

#[test]
fn real_slice_matches_direct_convolution() {
    let t = 0.4;
    let f = member(t, FAMILY[7]);
    for &x in &[-1.3, 0.0, 0.45, 2.2] {
        let direct: f64 = f
            .samples
            .iter()
            .enumerate()
            .map(|(j, v)| v * flat_heat_kernel(t, x - f.x(j)))
            .sum::<f64>()
            * f.h;
        let h = flat_transform_at(&f, t, C64::new(x, 0.0));
        assert!(h.im.abs() < 1e-15 && (h.re - direct).abs() < 1e-12 * direct.abs().max(1e-3));
    }
}

#[test]
fn point_evaluation_through_the_kernel() {
    let t = 0.5;
    let f = member(t, FAMILY[4]);
    for &w in &[C64::new(0.3, 0.9), C64::new(-1.1, -1.7), C64::new(2.0, 0.2)] {
        // H_t f(w) = ∫ f(u) k_t(w − u) du is the pairing with conj(k_t(w̄ − ·))
        let pairing: C64 = f
            .samples
            .iter()
            .enumerate()
            .map(|(j, v)| *v * flat_heat_kernel_c(t, w.conj() - f.x(j)).conj())
            .sum::<C64>()
            * f.h;
        let h = flat_transform_at(&f, t, w);
        assert!((pairing - h).norm() < 1e-6 * h.norm());
    }
}

#[test]
fn reproducing_kernel_recovers_point_values() {
    let t = 0.5;
    let m = FAMILY[5];
    let f = member(t, m);
    let big_f = flat_transform(&f, t, &bargmann_grid(t, m)).unwrap();
    let (nx, hx, hy) = (
        big_f.grid.xs.len(),
        big_f.grid.xs[1] - big_f.grid.xs[0],
        big_f.grid.ys[1] - big_f.grid.ys[0],
    );
    for &w in &[C64::new(0.2, 0.4), C64::new(-0.7, -0.9)] {
        let mut acc = C64::new(0.0, 0.0);
        for (k, v) in big_f.values.iter().enumerate() {
            let z = C64::new(big_f.grid.xs[k % nx], big_f.grid.ys[k / nx]);
            acc += v * flat_repro_kernel(t, z, w).conj() * flat_weight(t, z.im);
        }
        acc *= hx * hy;
        let direct = flat_transform_at(&f, t, w);
        assert!((acc - direct).norm() < 1e-5 * direct.norm());
    }
}

#[test]
fn cauchy_riemann_residual_is_small() {
    let t = 0.8;
    let h = 1e-4;
    for &(x, y) in &[(0.1, 0.2), (-1.0, 1.5), (2.0, -0.7)] {
        let z = C64::new(x, y);
        let dx = (flat_heat_kernel_c(t, z + h) - flat_heat_kernel_c(t, z - h)) / (2.0 * h);
        let dy = (flat_heat_kernel_c(t, z + C64::new(0.0, h)) - flat_heat_kernel_c(t, z - C64::new(0.0, h)))
            / (2.0 * h);
        // ∂_y F = i ∂_x F for holomorphic F
        assert!((dy - C64::i() * dx).norm() < 1e-8);
    }
}

#[test]
fn strip_certificate_example_and_refinement() {
    let mut p = StripFitParams::new(0.5, 1.0);
    p.y_fit = 5.0;
    p.y_probe = 15.0;
    let fit = strip_weight_fit(&p).unwrap();
    let last = fit.profile.last().unwrap();
    assert!((last.y - 15.0).abs() < 1e-12);
    assert!(last.mismatch > 1e3 * fit.fit_residual);
    let refined = strip_weight_fit(&p.refined(2)).unwrap();
    assert!(refined.profile.last().unwrap().mismatch >= 0.5 * last.mismatch);
    let mut prev = 0.0;
    for row in fit.certificate() {
        assert!(row.mismatch > prev);
        prev = row.mismatch;
    }
    eprintln!("frozen candidates: fit {:e} certificate {:e}", fit.fit_residual, last.mismatch);
}

#[test]
fn nonnegative_weights_cannot_fit_the_band() {
    let mut p = StripFitParams::new(0.5, 1.0);
    p.method = FitMethod::NonNegative;
    let fit = strip_weight_fit(&p).unwrap();
    assert!(fit.weight.iter().all(|&w| w >= 0.0));
    assert!(fit.fit_residual > 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn translation_equivariance(steps in -200i64..200, x in -2.0f64..2.0, y in -1.5f64..1.5) {
        let t = 0.3;
        let f = member(t, FAMILY[3]);
        let a = steps as f64 * f.h;
        let shifted = f.shifted_by_steps(steps);
        let z = C64::new(x, y);
        let lhs = flat_transform_at(&shifted, t, z);
        let rhs = flat_transform_at(&f, t, z + a);
        prop_assert!((lhs - rhs).norm() <= 1e-8 * rhs.norm().max(1e-12));
    }

    #[test]
    fn semigroup_on_the_line(s in 0.05f64..1.0, t in 0.05f64..1.0, x in -3.0f64..3.0) {
        let f = LineFunction::sample_default(s.max(t), |u| flat_heat_kernel(s, u));
        let conv: f64 = f.samples.iter().enumerate()
            .map(|(j, v)| v * flat_heat_kernel(t, x - f.x(j))).sum::<f64>() * f.h;
        let exact = flat_heat_kernel(s + t, x);
        prop_assert!((conv - exact).abs() <= 1e-8 * exact);
    }

    #[test]
    fn repro_kernel_is_hermitian(zr in -3.0f64..3.0, zi in -2.0f64..2.0, wr in -3.0f64..3.0, wi in -2.0f64..2.0, t in 0.1f64..2.0) {
        let (z, w) = (C64::new(zr, zi), C64::new(wr, wi));
        let a = flat_repro_kernel(t, z, w);
        let b = flat_repro_kernel(t, w, z).conj();
        prop_assert!((a - b).norm() <= 1e-13 * a.norm());
    }
}
