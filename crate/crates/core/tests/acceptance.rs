//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`). The process fails when a
//! criterion fails that is not listed in [`KNOWN_FAILURES`], or when a listed
//! one starts passing.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use crownheat::bergman::{fit_weight, growth_mismatch_certificate, lemma_aa_check, LemmaGrid, WeightFitParams};
use crownheat::config::{RunConfig, RunModel};
use crownheat::crown::{crown_inclusion_scan, geometric_ladder, phi_along_curve};
use crownheat::experiments::{run_suite, Suite, SuiteReport, LADDER_MU, LADDER_PHI};
use crownheat::fourier::{band_limited_family, calibrate, FourierPlan};
use crownheat::models::{boundary_curve_sigma, Model};
use crownheat::special::gaussian_psi_moment;
use crownheat::spherical::Plancherel;

/// Criteria whose literal statement is false; each is printed as FAIL.
/// 12: σ(0) = P(exp(iφ)·x_o) = 2cos 2φ, which is 2 only at φ = 0.
const KNOWN_FAILURES: [usize; 1] = [12];

struct Outcome {
    pass: bool,
    detail: String,
}

fn metric(rep: &SuiteReport, key: &str) -> f64 {
    rep.metrics[key].as_f64().unwrap_or(f64::NAN)
}

fn config(model: RunModel, t: f64) -> RunConfig {
    let mut c = RunConfig::defaults(model);
    c.t = t;
    c
}

fn flat(budget: Duration) -> [Outcome; 2] {
    let start = Instant::now();
    let (mut iso, mut kernel): (f64, f64) = (0.0, 0.0);
    let mut ok = true;
    for t in [0.1, 0.5, 2.0] {
        let rep = run_suite(Suite::FlatBargmann, &config(RunModel::Flat, t)).expect("flat suite");
        iso = iso.max(metric(&rep, "max_isometry_gap"));
        kernel = kernel.max(metric(&rep, "max_kernel_gap"));
        ok &= rep.passed;
    }
    let in_time = start.elapsed() <= budget;
    [
        Outcome { pass: iso <= 1e-5 && in_time, detail: format!("max rel err {iso:.2e} (tol 1e-5), 10 functions × 3 t") },
        Outcome {
            pass: ok && kernel <= 1e-5 && in_time,
            detail: format!("max rel err {kernel:.2e} (tol 1e-5), 20 w per t"),
        },
    ]
}

fn strip() -> Outcome {
    let mut worst_fit: f64 = 0.0;
    let mut worst_probe = f64::INFINITY;
    for t in [0.5, 1.0] {
        for gamma in [0.5, 1.0] {
            let mut c = config(RunModel::Flat, t);
            c.gamma = gamma;
            let rep = run_suite(Suite::StripObstruction, &c).expect("strip suite");
            worst_fit = worst_fit.max(metric(&rep, "fit_residual"));
            worst_probe = worst_probe.min(metric(&rep, "probe_residual")).min(metric(&rep, "refined_probe_residual"));
        }
    }
    Outcome {
        pass: worst_fit <= 1e-3 && worst_probe >= 0.9,
        detail: format!("fit residual ≤ {worst_fit:.2e} (tol 1e-3), probe residual ≥ {worst_probe:.3} (≥ 0.9, incl. 4× grid)"),
    }
}

fn plancherel() -> Outcome {
    let mut detail = Vec::new();
    let mut pass = true;
    for (model, tol) in [(Model::H3, 1e-4), (Model::H2, 1e-3)] {
        let grid = crownheat::fourier::GridSpec::default_for(model);
        let plan = FourierPlan::new(grid, calibrate(grid).expect("calibration").cx).expect("plan");
        let mut worst: f64 = 0.0;
        for ft in band_limited_family(grid, 2024, 10) {
            let f = plan.invert(&ft).expect("inverse transform");
            let (lhs, rhs) = plan.plancherel_check(&f).expect("Plancherel");
            worst = worst.max((lhs - rhs).abs() / lhs);
        }
        pass &= worst <= tol;
        detail.push(format!("{model:?} {worst:.2e} (tol {tol:e})"));
    }
    Outcome { pass, detail: format!("held-out family of 10: {}", detail.join(", ")) }
}

fn gutzmer() -> Outcome {
    let mut detail = Vec::new();
    let mut pass = true;
    for (model, limit) in [(RunModel::H3, 600), (RunModel::H2, 180)] {
        let start = Instant::now();
        let rep = run_suite(Suite::Gutzmer, &config(model, 0.25)).expect("gutzmer suite");
        let secs = start.elapsed().as_secs_f64();
        let gap = metric(&rep, "max_rel_gap");
        pass &= rep.passed && rep.rows.len() == 15 && gap <= 1e-3 && secs < limit as f64;
        detail.push(format!("{} {gap:.2e} in {secs:.0} s (< {limit} s)", model.name()));
    }
    Outcome { pass, detail: format!("3 × 5 matrix, tol 1e-3: {}", detail.join(", ")) }
}

fn moments() -> Outcome {
    let mut worst: f64 = 0.0;
    for rho2 in [0.25, 1.0] {
        for i in 0..20 {
            let t = 0.05 + 2.95 * i as f64 / 19.0;
            for j in 0..20 {
                let mu = 5.0 * j as f64 / 19.0;
                worst = worst.max(gaussian_psi_moment(t, mu, rho2, 1).expect("moment").rel_gap());
            }
        }
    }
    Outcome { pass: worst <= 1e-10, detail: format!("20×20 (t, μ), |ρ|² ∈ {{1/4, 1}}: {worst:.2e} (tol 1e-10)") }
}

fn norm_identity() -> Outcome {
    let mut detail = Vec::new();
    let mut pass = true;
    for (model, tol) in [(RunModel::H3, 1e-4), (RunModel::H2, 1e-3)] {
        let mut worst: f64 = 0.0;
        for t in [0.25, 1.0] {
            let mut c = config(model, t);
            c.count = 10;
            worst = worst.max(metric(&run_suite(Suite::NormIdentity, &c).expect("norm identity"), "max_rel_gap"));
        }
        pass &= worst <= tol;
        detail.push(format!("{} {worst:.2e} (tol {tol:e})", model.name()));
    }
    Outcome { pass, detail: format!("10 functions × t ∈ {{1/4, 1}}: {}", detail.join(", ")) }
}

fn image() -> Outcome {
    let mut detail = Vec::new();
    let mut pass = true;
    for model in [RunModel::H3, RunModel::H2] {
        let rep = run_suite(Suite::ImageTest, &config(model, 0.25)).expect("image test");
        let (value, residual, growth) =
            (metric(&rep, "max_value_gap"), metric(&rep, "max_preimage_residual"), metric(&rep, "non_member_growth"));
        pass &= rep.passed && value <= 1e-4 && residual <= 1e-4 && growth > 10.0;
        detail.push(format!("{} value {value:.1e} preimage {residual:.1e} growth {growth:.3e}", model.name()));
    }
    Outcome { pass, detail: detail.join("; ") }
}

fn heat_kernel() -> Outcome {
    let rep = run_suite(Suite::HeatCompare, &config(RunModel::H3, 0.25)).expect("heat compare");
    let gap = metric(&rep, "max_rel_gap");
    Outcome { pass: gap <= 1e-8, detail: format!("4 t × 5 r ∝ √t: {gap:.2e} (tol 1e-8)") }
}

fn two_kernel() -> Outcome {
    let pl = Plancherel::analytic(Model::H3);
    let mut worst: f64 = 0.0;
    for t in [0.25, 0.5] {
        for r in [0.0, 0.7, 1.5] {
            for y in [0.0, 0.3, 0.6] {
                worst = worst.max(lemma_aa_check(&pl, t, r, y, &LemmaGrid::default()).expect("two-kernel check").rel_gap);
            }
        }
    }
    Outcome { pass: worst <= 1e-3, detail: format!("2×3×3 (t, r, Y): {worst:.2e} (tol 1e-3)") }
}

fn complex_obstruction() -> Outcome {
    let params = WeightFitParams::new(0.25);
    let fit = fit_weight(&params).expect("weight fit");
    let refined = fit_weight(&params.refined(4)).expect("refined fit");
    let cert = growth_mismatch_certificate(0.25, fit.weight.l1_norm()).expect("certificate");
    Outcome {
        pass: fit.fit_residual <= 1e-2
            && fit.probe_residual >= 0.9
            && refined.probe_residual >= 0.9
            && cert.mu_star.is_finite()
            && cert.monotone,
        detail: format!(
            "t = 1/4: fit {:.2e} (tol 1e-2), probe {:.3} / refined {:.3} (≥ 0.9), μ* = {:.2}, monotone {}",
            fit.fit_residual, fit.probe_residual, refined.probe_residual, cert.mu_star, cert.monotone
        ),
    }
}

fn crown() -> Outcome {
    let start = boundary_curve_sigma(LADDER_PHI, 0.0).expect("σ(0)").re;
    let end = boundary_curve_sigma(LADDER_PHI, 1.0).expect("σ(1)").re;
    let dense: Vec<f64> = (0..=200).map(|k| 0.9999 * k as f64 / 200.0).collect();
    let scan = phi_along_curve(LADDER_MU, LADDER_PHI, &dense).expect("dense scan");
    let ladder = phi_along_curve(LADDER_MU, LADDER_PHI, &geometric_ladder(4)).expect("ladder");
    let inclusion = crown_inclusion_scan(10_000, 7).expect("inclusion scan");
    let checks = [
        ("σ(0) = 2", (start - 2.0).abs() <= 1e-12),
        ("σ(1) = −2", (end + 2.0).abs() <= 1e-12),
        ("σ real decreasing", scan.sigma_decreasing && scan.sigma_imag < 1e-10),
        ("ladder > 1e3", ladder.increasing && ladder.growth() > 1e3),
        ("inclusion 100%", inclusion.all_inside()),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    Outcome {
        pass: failed.is_empty(),
        detail: format!(
            "φ = 3π/8: σ(0) = {start:.6}, σ(1) = {end:.15}, growth {:.3e}, inside {}/{}; failed: [{}]",
            ladder.growth(),
            inclusion.inside_two_omega,
            inclusion.samples,
            failed.join(", ")
        ),
    }
}

fn timed(n: usize, name: &'static str, budget: u64, f: fn() -> Outcome) -> (usize, &'static str, Outcome, Duration) {
    let start = Instant::now();
    let mut o = f();
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(budget) {
        o.pass = false;
        o.detail.push_str(&format!("; over budget {budget} s"));
    }
    (n, name, o, elapsed)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let [iso, kernel] = flat(Duration::from_secs(20));
    let results = [
        (1, "flat isometry", iso, start.elapsed()),
        (2, "flat reproducing kernel", kernel, Duration::ZERO),
        timed(3, "strip obstruction", 60, strip),
        timed(4, "Plancherel isometry", 120, plancherel),
        timed(5, "Gutzmer identity", 780, gutzmer),
        timed(6, "moment identity", 1, moments),
        timed(7, "norm identity", 300, norm_identity),
        timed(8, "image characterization", 300, image),
        timed(9, "H3 heat kernel", 5, heat_kernel),
        timed(10, "two-kernel identity", 600, two_kernel),
        timed(11, "complex-group obstruction", 120, complex_obstruction),
        timed(12, "crown maximality", 60, crown),
    ];

    let mut unexpected = 0;
    for (n, name, o, elapsed) in &results {
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        let known = KNOWN_FAILURES.contains(n);
        let note = match (o.pass, known) {
            (false, true) => " (known)",
            (true, true) => " (listed as known failure)",
            _ => "",
        };
        if o.pass == known {
            unexpected += 1;
        }
        println!("{verdict} {n:>2} {name}{note}: {} [{:.1} s]", o.detail, elapsed.as_secs_f64());
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected outcome(s)");
        ExitCode::FAILURE
    }
}
