//! The verification suites behind the `crownheat` command line.
//!
//! Every suite returns a [`SuiteReport`]: a pass flag against tolerances
//! fixed here, scalar metrics for the JSON summary and a CSV table.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::bergman::{fit_weight, growth_mismatch_certificate, lemma_aa_check, LemmaGrid, WeightFitParams};
use crate::config::{CxSetting, RunConfig, RunModel};
use crate::crown::{crown_inclusion_scan, geometric_ladder, phi_along_curve};
use crate::error::{Error, Result};
use crate::flat::{
    flat_bargmann_norm, flat_repro_kernel, flat_transform, flat_transform_at, flat_weight, strip_weight_fit,
    LineFunction, StripFitParams, StripFunction, StripGrid,
};
use crate::fourier::{band_limited_family, calibrate, heat_bump_table, FourierPlan, FourierTable, GridSpec, FAMILY_SUPPORT};
use crate::heat::{
    heat_kernel, heat_kernel_h3_closed, heat_transform_apply, heat_transform_table, image_membership,
    norm_identity_check, orbital_integral_direct, orbital_integral_spectral, surjectivity_construct, CrownFunction,
    HeatRecord, OrbitGrid, Verdict,
};
use crate::models::{CrownPoint, Model};
use crate::spherical::Plancherel;
use crate::C64;

/// Version tag of the JSON summaries.
pub const SCHEMA: &str = "v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Plancherel,
    Gutzmer,
    NormIdentity,
    ImageTest,
    FlatBargmann,
    StripObstruction,
    ComplexObstruction,
    CrownBoundary,
    HeatCompare,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Plancherel,
        Suite::Gutzmer,
        Suite::NormIdentity,
        Suite::ImageTest,
        Suite::FlatBargmann,
        Suite::StripObstruction,
        Suite::ComplexObstruction,
        Suite::CrownBoundary,
        Suite::HeatCompare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Plancherel => "plancherel",
            Suite::Gutzmer => "gutzmer",
            Suite::NormIdentity => "norm-identity",
            Suite::ImageTest => "image-test",
            Suite::FlatBargmann => "flat-bargmann",
            Suite::StripObstruction => "strip-obstruction",
            Suite::ComplexObstruction => "complex-obstruction",
            Suite::CrownBoundary => "crown-boundary",
            Suite::HeatCompare => "heat-compare",
        }
    }

    /// The identity or statement a suite verifies.
    pub fn anchor(self) -> &'static str {
        match self {
            Suite::Plancherel => "Plancherel formula for the Helgason Fourier transform",
            Suite::Gutzmer => "Gutzmer identity for G-orbital integrals of heat transforms",
            Suite::NormIdentity => "norm identity of the heat kernel transform through the shift operator",
            Suite::ImageTest => "characterization of the image of the heat kernel transform",
            Suite::FlatBargmann => "Segal-Bargmann isometry and reproducing kernel on the line",
            Suite::StripObstruction => "no weighted Bergman description of the image on a strip",
            Suite::ComplexObstruction => "no G-invariant weight on the crown of a complex group",
            Suite::CrownBoundary => "spherical functions blow up on orbits leaving the domain P not in (-inf, -2]",
            Suite::HeatCompare => "spectral heat kernel of hyperbolic 3-space against its closed form",
        }
    }

    /// Models the suite runs on.
    pub fn models(self) -> &'static [RunModel] {
        match self {
            Suite::Plancherel | Suite::Gutzmer | Suite::NormIdentity | Suite::ImageTest => {
                &[RunModel::H2, RunModel::H3]
            }
            Suite::FlatBargmann | Suite::StripObstruction => &[RunModel::Flat],
            Suite::ComplexObstruction | Suite::HeatCompare => &[RunModel::H3],
            Suite::CrownBoundary => &[RunModel::H2],
        }
    }

    /// Column documentation for the CSV output.
    pub fn csv_columns(self) -> &'static str {
        match self {
            Suite::Plancherel | Suite::NormIdentity => "index,lhs,rhs,rel_gap",
            Suite::Gutzmer => "index,y,direct,spectral,rel_gap",
            Suite::ImageTest => "case,index,verdict,value,reference,growth,residual",
            Suite::FlatBargmann => "check,index,x,y,lhs,rhs,rel_gap",
            Suite::StripObstruction => "y,lhs,rhs,mismatch",
            Suite::ComplexObstruction => "band,mu,residual",
            Suite::CrownBoundary => "s,sigma,phi",
            Suite::HeatCompare => "t,r,spectral,closed,rel_gap",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite `{s}`")))
    }
}

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub metrics: Map<String, Value>,
    pub rows: Vec<Vec<String>>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        Self { suite, passed: true, metrics: Map::new(), rows: Vec::new() }
    }

    fn metric(&mut self, key: &str, v: impl Into<Value>) {
        self.metrics.insert(key.into(), v.into());
    }

    fn check(&mut self, ok: bool) {
        self.passed &= ok;
    }

    fn row(&mut self, cells: &[&dyn ToString]) {
        self.rows.push(cells.iter().map(|c| c.to_string()).collect());
    }

    pub fn summary(&self, config: &RunConfig) -> Value {
        json!({
            "schema": SCHEMA,
            "suite": self.suite.name(),
            "anchor": self.suite.anchor(),
            "model": config.model.name(),
            "passed": self.passed,
            "config": config,
            "metrics": self.metrics,
        })
    }

    pub fn csv(&self) -> String {
        let mut s = String::from(self.suite.csv_columns());
        s.push('\n');
        for r in &self.rows {
            writeln!(s, "{}", r.join(",")).expect("writing to a String");
        }
        s
    }
}

/// c_X of the run: the configured value, or a fresh calibration.
pub fn resolve_cx(config: &RunConfig, grid: GridSpec) -> Result<f64> {
    match config.cx {
        CxSetting::Value(v) => Ok(v),
        CxSetting::Auto => Ok(calibrate(grid)?.cx),
    }
}

/// Calibration on the configured grid and on a refined one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationRun {
    pub cx: f64,
    pub cx_refined: f64,
    pub rel_change: f64,
    pub stable: bool,
}

/// Tolerance on the change of c_X under refinement.
pub const CALIBRATION_STABILITY: f64 = 1e-6;

/// Calibrates c_X and repeats on a grid with 32 more radial nodes and twice
/// the μ-resolution. The flat model needs no calibration.
pub fn calibrate_run(config: &RunConfig) -> Result<CalibrationRun> {
    if config.model == RunModel::Flat {
        return Ok(CalibrationRun { cx: 1.0, cx_refined: 1.0, rel_change: 0.0, stable: true });
    }
    let grid = config.grid()?;
    let mut fine = grid;
    fine.n_r += 32;
    fine.n_mu = 2 * fine.n_mu - 1;
    let cx = calibrate(grid)?.cx;
    let cx_refined = calibrate(fine)?.cx;
    let rel_change = (cx - cx_refined).abs() / cx;
    Ok(CalibrationRun { cx, cx_refined, rel_change, stable: rel_change <= CALIBRATION_STABILITY })
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

fn plan_for(config: &RunConfig) -> Result<FourierPlan> {
    let grid = config.grid()?;
    FourierPlan::new(grid, resolve_cx(config, grid)?)
}

fn isometry_tol(model: Model) -> f64 {
    match model {
        Model::H2 => 1e-3,
        Model::H3 => 1e-4,
    }
}

/// Runs a suite after checking that the configured model fits it.
pub fn run_suite(suite: Suite, config: &RunConfig) -> Result<SuiteReport> {
    config.validate()?;
    if !suite.models().contains(&config.model) {
        let names: Vec<&str> = suite.models().iter().map(|m| m.name()).collect();
        return Err(Error::Config(format!("suite {} runs on model {}", suite.name(), names.join(" or "))));
    }
    match suite {
        Suite::Plancherel => plancherel(config),
        Suite::Gutzmer => gutzmer(config),
        Suite::NormIdentity => norm_identity(config),
        Suite::ImageTest => image_test(config),
        Suite::FlatBargmann => flat_bargmann(config),
        Suite::StripObstruction => strip_obstruction(config),
        Suite::ComplexObstruction => complex_obstruction(config),
        Suite::CrownBoundary => crown_boundary(config),
        Suite::HeatCompare => heat_compare(config),
    }
}

fn plancherel(config: &RunConfig) -> Result<SuiteReport> {
    let plan = plan_for(config)?;
    let tol = isometry_tol(plan.grid.model);
    let mut rep = SuiteReport::new(Suite::Plancherel);
    let mut worst: f64 = 0.0;
    for (i, ft) in band_limited_family(plan.grid, config.seed, config.count).iter().enumerate() {
        let f = plan.invert(ft)?;
        let (lhs, rhs) = plan.plancherel_check(&f)?;
        let gap = rel(rhs, lhs);
        worst = worst.max(gap);
        rep.row(&[&i, &lhs, &rhs, &gap]);
    }
    rep.check(worst <= tol);
    rep.metric("cx", plan.plancherel.cx);
    rep.metric("max_rel_gap", worst);
    rep.metric("tolerance", tol);
    Ok(rep)
}

/// Y-values of the orbital integral comparison.
pub const GUTZMER_YS: [f64; 5] = [0.0, 0.35, 0.7, 1.05, 1.4];

/// Test spectra for the orbital-integral comparison: the band-limited
/// family on H², radial heat bumps on H³.
pub fn gutzmer_family(grid: GridSpec, seed: u64, count: usize) -> Vec<FourierTable> {
    match grid.model {
        Model::H2 => band_limited_family(grid, seed, count),
        Model::H3 => (0..count)
            .map(|j| {
                let s = 0.15 + 0.1 * j as f64 / count.max(2).saturating_sub(1) as f64;
                heat_bump_table(grid, s, &CrownPoint::origin(Model::H3), Some(FAMILY_SUPPORT))
            })
            .collect(),
    }
}

fn gutzmer(config: &RunConfig) -> Result<SuiteReport> {
    let plan = plan_for(config)?;
    let model = plan.grid.model;
    let mut rep = SuiteReport::new(Suite::Gutzmer);
    let mut worst: f64 = 0.0;
    for (i, fhat) in gutzmer_family(plan.grid, config.seed, config.count).iter().enumerate() {
        let cf = heat_transform_table(&plan, fhat, config.t)?;
        for &y in &GUTZMER_YS {
            let direct = orbital_integral_direct(&plan, &cf, y, OrbitGrid::default_for(model))?;
            let spectral = orbital_integral_spectral(&plan, fhat, config.t, C64::new(0.0, y))?.re;
            let gap = rel(direct, spectral);
            worst = worst.max(gap);
            rep.row(&[&i, &y, &direct, &spectral, &gap]);
        }
    }
    rep.check(worst <= 1e-3);
    rep.metric("max_rel_gap", worst);
    rep.metric("tolerance", 1e-3);
    Ok(rep)
}

fn norm_identity(config: &RunConfig) -> Result<SuiteReport> {
    let plan = plan_for(config)?;
    let tol = isometry_tol(plan.grid.model);
    let mut rep = SuiteReport::new(Suite::NormIdentity);
    let mut worst: f64 = 0.0;
    let mut records = Vec::new();
    for (i, ft) in band_limited_family(plan.grid, config.seed, config.count).iter().enumerate() {
        let f = plan.invert(ft)?;
        let ni = norm_identity_check(&plan, &f, config.t)?;
        worst = worst.max(ni.rel_gap);
        rep.row(&[&i, &ni.lhs, &ni.rhs, &ni.rel_gap]);
        records.push(HeatRecord::new("norm_identity", plan.grid, config.t, ni.lhs, ni.rhs, tol));
    }
    rep.check(worst <= tol);
    rep.metric("max_rel_gap", worst);
    rep.metric("tolerance", tol);
    rep.metric("records", serde_json::to_value(records).expect("records serialize"));
    Ok(rep)
}

/// Factor by which the fake image element is under-smoothed: its spectrum
/// is e^{−st(μ²+|ρ|²)} with s below the 2 of a genuine heat transform.
pub const UNDER_SMOOTHING: f64 = 1.6;

/// Y-values of the membership test.
pub const MEMBERSHIP_YS: [f64; 4] = [0.0, 0.5, 1.0, 1.5];

fn image_test(config: &RunConfig) -> Result<SuiteReport> {
    let plan = plan_for(config)?;
    let model = plan.grid.model;
    let t = config.t;
    let mut rep = SuiteReport::new(Suite::ImageTest);
    let (mut worst_value, mut worst_residual): (f64, f64) = (0.0, 0.0);
    for (i, ft) in band_limited_family(plan.grid, config.seed, config.count).iter().enumerate() {
        let f = plan.invert(ft)?;
        let cf = heat_transform_apply(&plan, &f, t)?;
        let m = image_membership(&plan, &cf, t, &MEMBERSHIP_YS)?;
        let pre = surjectivity_construct(&plan, &cf, t)?;
        let reference = f.norm_sq();
        let gap = rel(m.value, reference);
        rep.check(m.verdict == Verdict::Member);
        worst_value = worst_value.max(gap);
        worst_residual = worst_residual.max(pre.residual);
        rep.row(&[&"member", &i, &verdict_name(m.verdict), &m.value, &reference, &m.growth, &pre.residual]);
    }
    let s = UNDER_SMOOTHING * t;
    let fake = FourierTable::from_fn(plan.grid, |_, mu| C64::new((-0.5 * s * (mu * mu + model.rho2())).exp(), 0.0));
    let cf = CrownFunction::from_spectrum(&plan, fake, t)?;
    let m = image_membership(&plan, &cf, t, &MEMBERSHIP_YS[..3])?;
    rep.check(m.verdict == Verdict::NonMember && m.growth > 10.0);
    rep.row(&[&"under-smoothed", &0, &verdict_name(m.verdict), &m.value, &f64::NAN, &m.growth, &f64::NAN]);
    rep.check(worst_value <= 1e-4 && worst_residual <= 1e-4);
    rep.metric("max_value_gap", worst_value);
    rep.metric("max_preimage_residual", worst_residual);
    rep.metric("non_member_growth", m.growth);
    rep.metric("tolerance", 1e-4);
    Ok(rep)
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Member => "member",
        Verdict::NonMember => "non-member",
        Verdict::Inconclusive => "inconclusive",
    }
}

/// (Hermite degree, width, centre) of the flat test family.
pub const HERMITE_FAMILY: [(usize, f64, f64); 10] = [
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

/// H_n((x−c)/a)·e^{−(x−c)²/2a²} sampled for the transform at time t.
pub fn hermite_member(t: f64, (n, a, c): (usize, f64, f64)) -> LineFunction {
    LineFunction::sample_default(t, move |x| {
        let u = (x - c) / a;
        hermite(n, u) * (-0.5 * u * u).exp()
    })
}

/// Strip grid wide and fine enough for the Bargmann norm of a family member.
pub fn hermite_strip_grid(t: f64, (n, a, c): (usize, f64, f64)) -> StripGrid {
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

/// ⟨F, 𝒦_w⟩ = ∫ F(z) conj(𝒦(z, w)) w_t(Im z) dz on the grid of F.
pub fn flat_kernel_pairing(big_f: &StripFunction, t: f64, w: C64) -> C64 {
    let nx = big_f.grid.xs.len();
    let hx = big_f.grid.xs[1] - big_f.grid.xs[0];
    let hy = big_f.grid.ys[1] - big_f.grid.ys[0];
    let mut acc = C64::new(0.0, 0.0);
    for (k, v) in big_f.values.iter().enumerate() {
        let z = C64::new(big_f.grid.xs[k % nx], big_f.grid.ys[k / nx]);
        acc += v * flat_repro_kernel(t, z, w).conj() * flat_weight(t, z.im);
    }
    acc * (hx * hy)
}

/// Tolerance of the flat isometry and reproducing-kernel checks.
pub const FLAT_TOL: f64 = 1e-5;

fn flat_bargmann(config: &RunConfig) -> Result<SuiteReport> {
    let t = config.t;
    let mut rep = SuiteReport::new(Suite::FlatBargmann);
    let mut worst_iso: f64 = 0.0;
    for (i, &m) in HERMITE_FAMILY.iter().enumerate() {
        let f = hermite_member(t, m);
        let big_f = flat_transform(&f, t, &hermite_strip_grid(t, m))?;
        let (lhs, rhs) = (f.norm_sq(), flat_bargmann_norm(&big_f, t)?);
        let gap = rel(rhs, lhs);
        worst_iso = worst_iso.max(gap);
        rep.row(&[&"isometry", &i, &f64::NAN, &f64::NAN, &lhs, &rhs, &gap]);
    }
    let m = HERMITE_FAMILY[5];
    let f = hermite_member(t, m);
    let big_f = flat_transform(&f, t, &hermite_strip_grid(t, m))?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let reach = t.sqrt();
    let mut worst_kernel: f64 = 0.0;
    for i in 0..20 {
        let w = C64::new(rng.random_range(-1.5..1.5), rng.random_range(-reach..reach));
        let pairing = flat_kernel_pairing(&big_f, t, w);
        let direct = flat_transform_at(&f, t, w);
        let gap = (pairing - direct).norm() / direct.norm();
        worst_kernel = worst_kernel.max(gap);
        rep.row(&[&"kernel", &i, &w.re, &w.im, &pairing.norm(), &direct.norm(), &gap]);
    }
    rep.check(worst_iso <= FLAT_TOL && worst_kernel <= FLAT_TOL);
    rep.metric("max_isometry_gap", worst_iso);
    rep.metric("max_kernel_gap", worst_kernel);
    rep.metric("tolerance", FLAT_TOL);
    Ok(rep)
}

fn strip_obstruction(config: &RunConfig) -> Result<SuiteReport> {
    let params = StripFitParams::new(config.t, config.gamma);
    let fit = strip_weight_fit(&params)?;
    let refined = strip_weight_fit(&params.refined(4))?;
    let mut rep = SuiteReport::new(Suite::StripObstruction);
    for r in &fit.profile {
        rep.row(&[&r.y, &r.lhs, &r.rhs, &r.mismatch]);
    }
    rep.check(fit.fit_residual <= 1e-3 && fit.probe_residual >= 0.9 && refined.probe_residual >= 0.9);
    rep.metric("gamma", config.gamma);
    rep.metric("fit_residual", fit.fit_residual);
    rep.metric("probe_residual", fit.probe_residual);
    rep.metric("refined_fit_residual", refined.fit_residual);
    rep.metric("refined_probe_residual", refined.probe_residual);
    rep.metric("condition", fit.condition);
    Ok(rep)
}

/// (r, Y) pairs of the two-kernel identity check.
pub const LEMMA_POINTS: [(f64, f64); 9] =
    [(0.0, 0.0), (0.0, 0.3), (0.0, 0.6), (0.7, 0.0), (0.7, 0.3), (0.7, 0.6), (1.5, 0.0), (1.5, 0.3), (1.5, 0.6)];

fn complex_obstruction(config: &RunConfig) -> Result<SuiteReport> {
    let t = config.t;
    let params = WeightFitParams::new(t);
    let fit = fit_weight(&params)?;
    let refined = fit_weight(&params.refined(4))?;
    let cert = growth_mismatch_certificate(t, fit.weight.l1_norm())?;
    let grid = config.grid()?;
    let pl = Plancherel::new(Model::H3, resolve_cx(config, grid)?);
    let mut lemma_worst: f64 = 0.0;
    let mut lemma = Vec::new();
    for &(r, y) in &LEMMA_POINTS {
        let c = lemma_aa_check(&pl, t, r, y, &LemmaGrid::default())?;
        lemma_worst = lemma_worst.max(c.rel_gap);
        lemma.push(c);
    }
    let mut rep = SuiteReport::new(Suite::ComplexObstruction);
    for &(mu, res) in &fit.fit_profile {
        rep.row(&[&"fit", &mu, &res]);
    }
    for &(mu, res) in &fit.probe_profile {
        rep.row(&[&"probe", &mu, &res]);
    }
    rep.check(fit.fit_residual <= 1e-2 && fit.probe_residual >= 0.9 && refined.probe_residual >= 0.9);
    rep.check(cert.mu_star.is_finite() && cert.monotone);
    rep.check(lemma_worst <= 1e-3);
    rep.metric("fit_residual", fit.fit_residual);
    rep.metric("probe_residual", fit.probe_residual);
    rep.metric("refined_fit_residual", refined.fit_residual);
    rep.metric("refined_probe_residual", refined.probe_residual);
    rep.metric("certificate", serde_json::to_value(&cert).expect("certificate serializes"));
    rep.metric("two_kernel_max_rel_gap", lemma_worst);
    rep.metric("two_kernel_checks", serde_json::to_value(&lemma).expect("checks serialize"));
    Ok(rep)
}

/// Spectral parameter and orbit angle of the blow-up ladder.
pub const LADDER_MU: f64 = 10.0;
pub const LADDER_PHI: f64 = 3.0 * PI / 8.0;

fn crown_boundary(config: &RunConfig) -> Result<SuiteReport> {
    let ladder = phi_along_curve(LADDER_MU, LADDER_PHI, &geometric_ladder(4))?;
    let dense: Vec<f64> = (0..=200).map(|k| 0.9999 * k as f64 / 200.0).collect();
    let scan = phi_along_curve(LADDER_MU, LADDER_PHI, &dense)?;
    let inclusion = crown_inclusion_scan(10_000, config.seed)?;
    let mut rep = SuiteReport::new(Suite::CrownBoundary);
    for (s, sigma, phi) in ladder.rows() {
        rep.row(&[&s, &sigma, &phi]);
    }
    rep.check(scan.sigma_decreasing && scan.sigma_imag < 1e-10 && scan.positive);
    rep.check(ladder.increasing && ladder.growth() > 1e3);
    rep.check(inclusion.all_inside() && inclusion.all_exit());
    rep.metric("sigma_start", scan.sigma[0].re);
    rep.metric("ladder_growth", ladder.growth());
    rep.metric("inclusion", serde_json::to_value(&inclusion).expect("report serializes"));
    Ok(rep)
}

/// Heat times and radii (in units of √t) of the closed-form comparison.
pub const HEAT_TIMES: [f64; 4] = [0.05, 0.25, 1.0, 3.0];
pub const HEAT_RADII: [f64; 5] = [0.0, 0.1, 0.5, 1.0, 1.5];

fn heat_compare(config: &RunConfig) -> Result<SuiteReport> {
    let grid = config.grid()?;
    let pl = Plancherel::new(Model::H3, resolve_cx(config, grid)?);
    let mut rep = SuiteReport::new(Suite::HeatCompare);
    let mut worst: f64 = 0.0;
    let mut records = Vec::new();
    for &t in &HEAT_TIMES {
        for &c in &HEAT_RADII {
            let r = c * t.sqrt();
            let spectral = heat_kernel(&pl, t, r)?;
            let closed = heat_kernel_h3_closed(pl.cx, t, C64::new(2.0 * r, 0.0)).re;
            let gap = rel(spectral, closed);
            worst = worst.max(gap);
            rep.row(&[&t, &r, &spectral, &closed, &gap]);
            records.push(HeatRecord::new("heat_kernel", grid, t, spectral, closed, 1e-8));
        }
    }
    rep.check(worst <= 1e-8);
    rep.metric("max_rel_gap", worst);
    rep.metric("tolerance", 1e-8);
    rep.metric("records", serde_json::to_value(records).expect("records serialize"));
    Ok(rep)
}
