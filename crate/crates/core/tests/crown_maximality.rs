use std::f64::consts::{FRAC_PI_4, PI};

use crownheat::crown::*;
use crownheat::models::{p_function, CrownPoint, GroupElement, Model};
use crownheat::special::legendre_conical;
use crownheat::spherical::{phi_at, phi_real};
use crownheat::{Error, C64};
use proptest::prelude::*;

#[test]
fn spherical_function_factors_through_p() {
    for &mu in &[0.0, 0.7, 4.0] {
        for j in 0..10 {
            let r = 0.3 * j as f64;
            let z = CrownPoint::real(GroupElement::a(Model::H2, r));
            let via_p = legendre_conical(mu, 0.5 * p_function(&z)).unwrap().re;
            let direct = phi_real(Model::H2, mu, r).unwrap();
            assert!((via_p - direct).abs() <= 1e-8 * direct.abs().max(1e-3), "μ={mu} r={r}");
        }
    }
}

#[test]
fn scan_starts_at_the_orbit_base_point() {
    // γ(0) = e, so Φ(σ(0)) is φ_λ(exp(iφ)·x_o) = P_{−1/2+iμ}(cos 2φ)
    let phi = 3.0 * PI / 8.0;
    for &mu in &[0.5, 3.0] {
        let scan = phi_along_curve(mu, phi, &[0.0]).unwrap();
        assert!((scan.sigma[0].re - 2.0 * (2.0 * phi).cos()).abs() < 1e-12);
        let base = CrownPoint::complexified(GroupElement::identity(Model::H2), phi);
        let expected = phi_at(mu, &base).unwrap();
        assert!((scan.values[0] - expected).norm() <= 1e-12 * expected.norm());
    }
}

#[test]
fn values_are_positive_along_the_curve() {
    let sgrid: Vec<f64> = (0..200).map(|k| k as f64 / 200.0).collect();
    for &phi in &[0.3 * PI, 3.0 * PI / 8.0, 0.45 * PI] {
        for &mu in &[0.0, 0.5, 3.0, 10.0] {
            let scan = phi_along_curve(mu, phi, &sgrid).unwrap();
            assert!(scan.positive, "φ={phi} μ={mu}");
            assert!(scan.sigma_decreasing && scan.sigma_imag < 1e-10);
            assert!(scan.sigma.iter().all(|s| s.re > -2.0 && s.re <= 2.0));
        }
    }
}

#[test]
fn ladder_blows_up() {
    let phi = 3.0 * PI / 8.0;
    let scan = phi_along_curve(10.0, phi, &geometric_ladder(4)).unwrap();
    assert!(scan.increasing);
    assert!(scan.growth() > 1e3, "growth {}", scan.growth());
    let at = |s: f64| phi_along_curve(10.0, phi, &[s]).unwrap().values[0].re;
    assert!(at(1.0 - 1e-3) > 10.0 * at(1.0 - 1e-1));
    let logs: Vec<f64> = scan.values.iter().map(|v| v.re.ln()).collect();
    assert!(logs.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn scan_rejects_bad_grids() {
    let phi = 3.0 * PI / 8.0;
    assert!(matches!(phi_along_curve(1.0, phi, &[0.5, 1.0 - 1e-5]), Err(Error::Domain(_))));
    assert!(phi_along_curve(1.0, phi, &[]).is_err());
    assert!(phi_along_curve(1.0, 0.2, &[0.5]).is_err());
}

#[test]
fn near_the_endpoint_the_cut_is_reported() {
    // for φ close to π/2 the whole curve hugs σ = −2
    let phi = 0.499 * PI;
    let s = 1.0 - 1e-4;
    let sigma = crownheat::models::boundary_curve_sigma(phi, s).unwrap();
    assert!(0.5 * sigma.re + 1.0 < 1e-6);
    assert!(matches!(phi_along_curve(1.0, phi, &[s]), Err(Error::BranchCut { .. })));
}

#[test]
fn inclusion_scan() {
    let report = crown_inclusion_scan(10_000, 7).unwrap();
    assert!(report.all_inside());
    assert!(report.all_exit());
    for e in &report.exits {
        assert!((e.sigma_start - 2.0 * (2.0 * e.phi).cos()).abs() < 1e-12);
        assert!((e.sigma_end + 2.0).abs() < 1e-12);
    }
    // Re P = 2cos 2Y·cosh 2r on g·exp(iY)·x_o
    let floor = 2.0 * (2.0 * (FRAC_PI_4 - 1e-3)).cos();
    assert!(report.boundary_min_re_p > 0.0);
    assert!(report.boundary_min_re_p >= floor * (1.0 - 1e-9));
}

#[test]
fn scan_rows() {
    let scan = phi_along_curve(2.0, 3.0 * PI / 8.0, &[0.0, 0.5]).unwrap();
    let rows: Vec<_> = scan.rows().collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1].0, 0.5);
    assert_eq!(C64::new(rows[1].1, 0.0), C64::new(scan.sigma[1].re, 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn curve_is_real_decreasing_and_positive(phi in (FRAC_PI_4 + 0.01)..(2.0 * FRAC_PI_4 - 0.01), mu in 0.0f64..8.0) {
        let sgrid: Vec<f64> = (0..40).map(|k| 0.99 * k as f64 / 39.0).collect();
        let scan = phi_along_curve(mu, phi, &sgrid).unwrap();
        prop_assert!(scan.sigma_imag < 1e-10);
        prop_assert!(scan.sigma_decreasing);
        prop_assert!(scan.positive);
    }
}
