use std::f64::consts::{FRAC_PI_4, PI};

use crownheat::models::Model;
use crownheat::special::legendre_conical;
use crownheat::spherical::{
    esa_bound_check, inverse_c_squared, phi_complex_group, phi_crown, phi_real,
    phi_real_kintegral, psi, Plancherel,
};
use crownheat::C64;
use proptest::prelude::*;

fn grid(n: usize, a: f64, b: f64) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

// |φ_λ| ≤ φ_0, so errors are measured against the μ = 0 envelope
fn envelope(model: Model, r: f64) -> f64 {
    phi_real(model, 0.0, r).unwrap()
}

#[test]
fn h2_dual_evaluation_grid() {
    let mut worst: f64 = 0.0;
    for &mu in &grid(20, 0.0, 20.0) {
        for &r in &grid(20, 0.0, 3.0) {
            let a = phi_real(Model::H2, mu, r).unwrap();
            let b = phi_real_kintegral(Model::H2, mu, r);
            worst = worst.max((a - b).abs() / envelope(Model::H2, r));
        }
    }
    assert!(worst < 1e-8, "worst {worst}");
}

#[test]
fn h2_dual_evaluation_reference_point() {
    let a = phi_real(Model::H2, 1.0, 0.5).unwrap();
    let b = phi_real_kintegral(Model::H2, 1.0, 0.5);
    assert!((a - b).abs() < 1e-8 * a.abs());
    assert!((a - 0.722_075_228_279_374_57).abs() < 1e-12);
}

#[test]
fn h3_dual_evaluation_grid() {
    let mut worst: f64 = 0.0;
    for &mu in &grid(20, 0.0, 20.0) {
        for &r in &grid(20, 0.0, 3.0) {
            let a = phi_real(Model::H3, mu, r).unwrap();
            let b = phi_real_kintegral(Model::H3, mu, r);
            worst = worst.max((a - b).abs() / envelope(Model::H3, r));
        }
    }
    assert!(worst < 1e-8, "worst {worst}");
}

#[test]
fn h3_closed_form_normalization() {
    for &(mu, r) in &[(0.5f64, 0.3f64), (3.0, 1.2), (12.0, 2.5)] {
        let expect = (2.0 * mu * r).sin() / (mu * (2.0 * r).sinh());
        let got = phi_complex_group(mu, C64::new(r, 0.0));
        assert!((got.re - expect).abs() < 1e-10 * expect.abs().max(1e-3));
        assert!(got.im.abs() < 1e-14);
        assert!((phi_real(Model::H3, mu, r).unwrap() - expect).abs() < 1e-10);
    }
    assert!((phi_complex_group(4.0, C64::new(0.0, 0.0)) - 1.0).norm() < 1e-15);
}

#[test]
fn crown_origin_is_one() {
    for model in [Model::H2, Model::H3] {
        for &mu in &[0.0, 2.0, 9.0] {
            let v = phi_crown(model, mu, 0.0, 0.0).unwrap();
            assert!((v - 1.0).norm() < 1e-12, "{model:?} {mu} {v}");
        }
    }
}

#[test]
fn crown_rejects_boundary() {
    assert!(phi_crown(Model::H2, 1.0, FRAC_PI_4, 0.0).is_err());
    assert!(phi_crown(Model::H3, 1.0, -FRAC_PI_4 + 1e-10, 0.3).is_err());
    assert!(esa_bound_check(Model::H3, &[1.0], FRAC_PI_4).is_err());
}

#[test]
fn se_inequality_on_grid() {
    for model in [Model::H2, Model::H3] {
        for &mu in &[0.0, 1.0, 4.0, 10.0] {
            for &y in &grid(7, -0.7, 0.7) {
                let top = phi_crown(model, mu, y, 0.0).unwrap();
                assert!(top.re > 0.0 && top.im.abs() < 1e-12 * top.re);
                for &u in &grid(6, -2.0, 2.0) {
                    let v = phi_crown(model, mu, y, u).unwrap();
                    assert!(v.norm() <= top.re * (1.0 + 1e-8), "{model:?} {mu} {y} {u}");
                }
            }
        }
    }
}

#[test]
fn h3_crown_matches_continuation() {
    for &mu in &[0.0, 0.8, 3.0, 10.0] {
        for &y in &[0.05, 0.2, 0.35, 0.6, -0.45] {
            for &u in &[0.0, 0.4, -1.1, 2.0] {
                let got = phi_crown(Model::H3, mu, y, u).unwrap();
                let expect = phi_complex_group(mu, C64::new(u, 2.0 * y));
                assert!((got - expect).norm() <= 1e-7 * expect.norm(), "{mu} {y} {u}: {got} {expect}");
            }
        }
    }
}

#[test]
fn h3_closed_form_on_imaginary_log() {
    for &mu in &[0.5f64, 5.0] {
        for &y in &[0.1f64, 0.5, 0.7] {
            let expect = (4.0 * mu * y).sinh() / (mu * (4.0 * y).sin());
            let got = phi_complex_group(mu, C64::new(0.0, 2.0 * y));
            assert!((got.re - expect).abs() < 1e-10 * expect && got.im.abs() < 1e-10 * expect);
        }
    }
}

#[test]
fn h2_crown_matches_legendre_continuation() {
    for &mu in &[0.0, 1.5, 6.0] {
        for &y in &[0.1, 0.3, 0.5, 0.7] {
            for &u in &[0.0, 0.7, -1.5] {
                let w = C64::new(2.0 * u, 4.0 * y).cosh();
                let expect = legendre_conical(mu, w).unwrap();
                let got = phi_crown(Model::H2, mu, y, u).unwrap();
                assert!((got - expect).norm() <= 1e-7 * expect.norm(), "{mu} {y} {u}");
            }
        }
    }
}

#[test]
fn psi_values() {
    assert_eq!(psi(3.0, C64::new(0.0, 0.0)), C64::new(2.0, 0.0));
    let v = psi(1.0, C64::new(0.0, 1.0));
    assert!((v.re - 2.0 * 1f64.cosh()).abs() < 1e-15 && v.im == 0.0);
}

#[test]
fn plancherel_asymptotics() {
    let p = Plancherel::analytic(Model::H2);
    let ratio = p.density(40.0) / 40.0;
    assert!((ratio - PI * p.cx).abs() < 1e-12);
    for model in [Model::H2, Model::H3] {
        assert_eq!(Plancherel::analytic(model).density(0.0), 0.0);
    }
    assert!(inverse_c_squared(Model::H2, 1e-3) > 0.0);
}

#[test]
fn esa_h3_monotone_ratio() {
    let mus = grid(81, 0.0, 40.0);
    let b = esa_bound_check(Model::H3, &mus, 0.5).unwrap();
    assert!(b.ok);
    assert!(b.ratios.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
    assert!(b.c_y.is_finite());
}

#[test]
fn esa_constant_grows_with_y_and_holds_on_denser_grid() {
    for model in [Model::H2, Model::H3] {
        let mus = grid(41, 0.0, 40.0);
        let dense = grid(161, 0.0, 40.0);
        let mut last = 0.0;
        for &y in &grid(8, 0.0, 0.7) {
            let b = esa_bound_check(model, &mus, y).unwrap();
            assert!(b.ok, "{model:?} {y}");
            assert!(b.c_y >= last * (1.0 - 1e-12));
            last = b.c_y;
            let d = esa_bound_check(model, &dense, y).unwrap();
            assert!(d.ratios.iter().all(|r| *r <= b.c_y * (1.0 + 1e-9)));
        }
    }
}

proptest! {
    #[test]
    fn psi_positive_on_imaginary_axis(mu in 0.0..30.0f64, y in -3.0..3.0f64) {
        let v = psi(mu, C64::new(0.0, y));
        prop_assert!(v.re >= 2.0 && v.im.abs() < 1e-12 * v.re);
    }

    #[test]
    fn phi_at_origin(mu in 0.0..50.0f64) {
        for model in [Model::H2, Model::H3] {
            prop_assert!((phi_real(model, mu, 0.0).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn weyl_invariance(mu in 0.0..20.0f64, r in 0.0..3.0f64) {
        let x = C64::new((2.0 * r).cosh(), 0.0);
        let a = legendre_conical(mu, x).unwrap();
        let b = legendre_conical(-mu, x).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-3));
        let c = phi_complex_group(mu, C64::new(r, 0.0));
        let d = phi_complex_group(-mu, C64::new(r, 0.0));
        prop_assert!((c - d).norm() < 1e-14);
    }
}
