use crownheat::bergman::*;
use crownheat::heat::{heat_kernel, heat_kernel_h3_closed};
use crownheat::models::{random_h2, random_h3, CrownPoint, GroupElement, Model};
use crownheat::spherical::Plancherel;
use crownheat::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn curved_kernel_at_the_origin() {
    for model in [Model::H2, Model::H3] {
        let pl = Plancherel::analytic(model);
        let o = CrownPoint::origin(model);
        for &t in &[0.25, 1.0] {
            let k = curved_repro_kernel(&pl, t, &o, &o).unwrap();
            assert!(rel(k.re, heat_kernel(&pl, 2.0 * t, 0.0).unwrap()) < 1e-12);
            assert!(k.im.abs() < 1e-14 * k.re);
        }
    }
}

#[test]
fn curved_kernel_on_the_real_form_is_the_heat_kernel() {
    for model in [Model::H2, Model::H3] {
        let pl = Plancherel::analytic(model);
        let o = CrownPoint::origin(model);
        for &t in &[0.1, 0.5] {
            for j in 0..8 {
                let r = 0.25 * j as f64;
                let z = CrownPoint::real(GroupElement::a(model, r));
                let k = curved_repro_kernel(&pl, t, &z, &o).unwrap();
                let expected = heat_kernel(&pl, 2.0 * t, r).unwrap();
                assert!((k.re - expected).abs() <= 1e-8 * expected.abs().max(1e-300), "{model:?} t={t} r={r}");
                assert!(k.im.abs() <= 1e-10 * k.re.abs());
            }
        }
    }
}

#[test]
fn curved_kernel_is_hermitian() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for model in [Model::H2, Model::H3] {
        let pl = Plancherel::analytic(model);
        for _ in 0..6 {
            let g = |rng: &mut ChaCha8Rng| match model {
                Model::H2 => random_h2(rng, 1.0),
                Model::H3 => random_h3(rng, 1.0),
            };
            let z = CrownPoint::from_coords(g(&mut rng), rng.random_range(-0.35..0.35)).unwrap();
            let w = CrownPoint::from_coords(g(&mut rng), rng.random_range(-0.35..0.35)).unwrap();
            let zw = curved_repro_kernel(&pl, 0.5, &z, &w).unwrap();
            let wz = curved_repro_kernel(&pl, 0.5, &w, &z).unwrap();
            assert!((zw - wz.conj()).norm() <= 1e-10 * zw.norm(), "{model:?}: {zw} vs {wz}");
        }
    }
}

#[test]
fn curved_kernel_validity() {
    // w̄⁻¹z = exp(1.4i)·x_o lies outside the crown but inside X̂_{ℂ,2Ω}
    let pl = Plancherel::analytic(Model::H2);
    let z = CrownPoint::from_coords(GroupElement::identity(Model::H2), 0.7).unwrap();
    let k = curved_repro_kernel(&pl, 0.5, &z, &z).unwrap();
    assert!(k.re.is_finite() && k.im.abs() <= 1e-10 * k.re.abs());
    let pl3 = Plancherel::analytic(Model::H3);
    let bare = CrownPoint::complexified(GroupElement::identity(Model::H3), 0.1);
    assert!(matches!(curved_repro_kernel(&pl3, 0.5, &bare, &CrownPoint::origin(Model::H3)), Err(Error::Domain(_))));
    let mixed = curved_repro_kernel(&pl3, 0.5, &CrownPoint::origin(Model::H2), &CrownPoint::origin(Model::H3));
    assert!(matches!(mixed, Err(Error::Domain(_))));
}

#[test]
fn two_kernel_identity_at_the_identity_is_the_semigroup() {
    let pl = Plancherel::analytic(Model::H3);
    for &t in &[0.25, 0.5] {
        let c = lemma_aa_check(&pl, t, 0.0, 0.0, &LemmaGrid::default()).unwrap();
        let k4t = heat_kernel_h3_closed(pl.cx, 4.0 * t, 0.0.into()).re;
        assert!(rel(c.lhs, k4t) < 1e-8, "{} vs {k4t}", c.lhs);
        assert!(rel(c.rhs, k4t) < 1e-10);
    }
}

#[test]
fn two_kernel_identity() {
    let pl = Plancherel::analytic(Model::H3);
    let c = lemma_aa_check(&pl, 0.5, 0.7, 0.3, &LemmaGrid::default()).unwrap();
    assert!(c.rel_gap <= 1e-3, "{c:?}");
    for &y in &[0.0, 0.3, 0.6] {
        let c = lemma_aa_check(&pl, 0.25, 0.0, y, &LemmaGrid::default()).unwrap();
        assert!(c.rhs > 0.0 && c.rel_gap <= 1e-3, "{c:?}");
    }
    // away from the identity the oscillation of φ_λ(a) can make both sides negative
    let c = lemma_aa_check(&pl, 0.25, 1.5, 0.6, &LemmaGrid::default()).unwrap();
    assert!(c.rhs < 0.0 && c.lhs < 0.0 && c.rel_gap <= 1e-3, "{c:?}");
}

#[test]
fn two_kernel_identity_rejects_bad_input() {
    let grid = LemmaGrid::default();
    assert!(lemma_aa_check(&Plancherel::analytic(Model::H2), 0.5, 0.0, 0.0, &grid).is_err());
    let pl = Plancherel::analytic(Model::H3);
    assert!(matches!(lemma_aa_check(&pl, 0.5, 0.0, 0.8, &grid), Err(Error::CrownBoundary(_))));
    assert!(lemma_aa_check(&pl, 0.0, 0.0, 0.1, &grid).is_err());
}

#[test]
fn heat_weight_ratio_is_odd() {
    for &t in &[0.1, 0.5, 2.0] {
        for j in 1..40 {
            let y = 0.02 * j as f64;
            let (a, b) = (heat_weight_ratio(t, y), heat_weight_ratio(t, -y));
            assert!((a + b).abs() <= 1e-12 * a.abs());
        }
    }
}

#[test]
fn zero_weight_has_unit_residual() {
    let mus: Vec<f64> = (0..50).map(|j| 0.25 * j as f64).collect();
    assert_eq!(weight_equation_residual(0.5, &WeightCandidate::zero(32), &mus), 1.0);
}

#[test]
fn folded_rhs_matches_direct_quadrature() {
    // (1/μ)∫ sinh(4μY)W dY against a midpoint rule for W = Y(π/4 − Y)
    let mut w = WeightCandidate::zero(48);
    w.values = w.y.iter().map(|y| y * (std::f64::consts::FRAC_PI_4 - y)).collect();
    for &mu in &[0.0, 0.7, 3.0] {
        let n = 200_000;
        let h = std::f64::consts::FRAC_PI_4 / n as f64;
        let mut direct = 0.0;
        for j in 0..n {
            let y = (j as f64 + 0.5) * h;
            let k = if mu == 0.0 { 4.0 * y } else { (4.0 * mu * y).sinh() / mu };
            direct += k * y * (std::f64::consts::FRAC_PI_4 - y) * h;
        }
        assert!(rel(w.rhs(mu), direct) < 1e-9, "μ={mu}");
    }
}

#[test]
fn heat_weight_fails_the_weight_equation() {
    let w = WeightCandidate::from_heat_weight(0.5, 64);
    let probe: Vec<f64> = (0..=40).map(|j| 8.0 + 0.1 * j as f64).collect();
    assert!(weight_equation_residual(0.5, &w, &probe) > 0.99);
}

#[test]
fn fit_and_probe() {
    let fit = fit_weight(&WeightFitParams::new(0.25)).unwrap();
    assert!(fit.fit_residual <= 1e-4, "fit {}", fit.fit_residual);
    assert!(fit.probe_residual >= 0.99, "probe {}", fit.probe_residual);
    let refined = fit_weight(&WeightFitParams::new(0.25).refined(4)).unwrap();
    assert!(refined.fit_residual <= 1e-4);
    assert!(refined.probe_residual >= 0.9);
    assert_eq!(fit.fit_profile.len(), 81);
    assert_eq!(refined.probe_profile.len(), 4 * 161);
}

#[test]
fn fit_weight_rejects_bad_bands() {
    let mut p = WeightFitParams::new(0.25);
    p.mu_probe = 2.0;
    assert!(fit_weight(&p).is_err());
}

fn ln_ratio_oracle(t: f64, l1: f64, mu: f64) -> f64 {
    let env = if mu == 0.0 { std::f64::consts::PI } else { (std::f64::consts::PI * mu).sinh() / mu };
    2.0 * t * (mu * mu + 1.0) - (l1 * env).ln()
}

#[test]
fn certificate_at_half() {
    let c = growth_mismatch_certificate(0.5, 1.0).unwrap();
    let step = c.envelope_params.mu_step;
    assert!(c.mu_star.is_finite() && c.mu_star > 0.0);
    assert!(c.ratio >= 1e6);
    assert!(ln_ratio_oracle(0.5, 1.0, c.mu_star - step) < 1e6f64.ln());
    assert!(rel(c.ratio.ln(), ln_ratio_oracle(0.5, 1.0, c.mu_star)) < 1e-12);
    assert!(c.ratio_at_double >= 1e12 * c.ratio);
    assert!(rel(c.ratio_at_double.ln(), ln_ratio_oracle(0.5, 1.0, 2.0 * c.mu_star)) < 1e-12);
    assert!(c.monotone);
    let json = serde_json::to_value(&c).unwrap();
    for key in ["t", "mu_star", "ratio", "envelope_params"] {
        assert!(json.get(key).is_some(), "{key}");
    }
}

#[test]
fn certificate_agrees_with_the_fit() {
    let fit = fit_weight(&WeightFitParams::new(0.25)).unwrap();
    let c = growth_mismatch_certificate(0.25, fit.weight.l1_norm()).unwrap();
    assert!(c.mu_star < fit.params.mu_probe);
    for &(mu, res) in fit.probe_profile.iter().filter(|p| p.0 >= c.mu_star) {
        assert!(res >= 1.0 - 1.0 / c.ratio, "μ={mu}: {res}");
    }
}

#[test]
fn certificate_rejects_bad_input() {
    assert!(growth_mismatch_certificate(0.0, 1.0).is_err());
    assert!(growth_mismatch_certificate(0.5, 0.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn envelope_bounds_every_weight(seed in 0u64..1000, mu in 0.0f64..15.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut w = WeightCandidate::zero(24);
        w.values = (0..24).map(|_| rng.random_range(-1.0..1.0)).collect();
        let env = EnvelopeParams::new(w.l1_norm());
        prop_assert!(w.rhs(mu).abs() <= env.ln_envelope(mu).exp() * (1.0 + 1e-12));
    }

    #[test]
    fn certificate_ratio_increases_past_mu_star(t in 0.2f64..3.0, l1 in 1e-3f64..1e6) {
        let c = growth_mismatch_certificate(t, l1).unwrap();
        prop_assert!(c.monotone);
        prop_assert!(c.ratio >= 1e6);
    }
}
