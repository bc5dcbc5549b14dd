//! Curved reproducing kernels and the obstruction to a G-invariant weight
//! on the crown of hyperbolic 3-space.
//!
//! Crown coordinates follow [`crate::models`]: exp(iY) acts through
//! diag(e^{iY}, e^{−iY}), so the reduced point w̄⁻¹z of z = g₁exp(iY₁)·x_o and
//! w = g₂exp(iY₂)·x_o has Gram matrix E₂M E₁² M* E₂ with M = g₂⁻¹g₁ and
//! E = diag(e^{iY}, e^{−iY}).

use std::f64::consts::{FRAC_PI_4, PI};

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::heat::{heat_kernel_crown, heat_kernel_h3_closed, weight_w};
use crate::models::{haar_kak_density, in_hat_domain, CrownPoint, HatDomain, Mat2, Model};
use crate::quadrature::{composite_gauss_legendre, gauss_legendre, linspace};
use crate::spherical::{phi_complex_group, phi_real, Plancherel};
use crate::C64;

fn diag(y: f64) -> Mat2 {
    Mat2::new(C64::from_polar(1.0, y), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::from_polar(1.0, -y))
}

/// The reduced point w̄⁻¹z, checked against the domain of the continued
/// heat kernel.
pub fn reduced_point(z: &CrownPoint, w: &CrownPoint) -> Result<CrownPoint> {
    let (Some((g1, y1)), Some((g2, y2))) = (z.coords, w.coords) else {
        return Err(Error::Domain("the curved kernel needs points given in crown coordinates".into()));
    };
    if z.model != w.model {
        return Err(Error::Domain("points from different models".into()));
    }
    let m = g2.inverse().mul(&g1).m;
    let left = diag(y2) * m * diag(y1);
    let rep = match z.model {
        Model::H2 => left,
        Model::H3 => left * diag(y1) * m.adjoint() * diag(y2),
    };
    let p = CrownPoint { rep, model: z.model, coords: None };
    let valid = match z.model {
        Model::H2 => in_hat_domain(&p, HatDomain::TwoOmega)?,
        Model::H3 => {
            let h = p.half_trace();
            !(h.im.abs() <= 1e-12 * (1.0 + h.norm()) && h.re <= -1.0)
        }
    };
    if !valid {
        return Err(Error::Domain("w̄⁻¹z leaves the domain of the continued heat kernel".into()));
    }
    Ok(p)
}

/// 𝒦^t(z, w) = k̃_{2t}(w̄⁻¹z).
pub fn curved_repro_kernel(pl: &Plancherel, t: f64, z: &CrownPoint, w: &CrownPoint) -> Result<C64> {
    heat_kernel_crown(pl, 2.0 * t, &reduced_point(z, w)?)
}

/// Quadrature sizes for [`lemma_aa_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaGrid {
    /// Gauss–Legendre panels in the radial variable, 16 nodes each.
    pub radial_panels: usize,
    /// Nodes in the polar variable of the right K-factor.
    pub n_u: usize,
    /// Nodes in cos θ and in the azimuth on the sphere of the left K-factor.
    pub n_theta: usize,
    pub n_azimuth: usize,
}

impl Default for LemmaGrid {
    fn default() -> Self {
        Self { radial_panels: 12, n_u: 32, n_theta: 32, n_azimuth: 32 }
    }
}

/// Both sides of the two-kernel identity on H³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaCheck {
    pub t: f64,
    pub r: f64,
    pub y: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_gap: f64,
}

/// ∫_G k̃_{2t}(a_r⁻¹g exp(iY)) k̃_{2t}(g exp(−iY)) dg by KAK quadrature
/// against ∫ e^{−4t(μ²+|ρ|²)} φ_λ(a_r) φ_λ(exp 2iY) dPl(μ), on H³.
///
/// With g = k₁a_s k₂ the second factor depends on s and the polar cosine u
/// of k₂σ₃k₂*, the first also on the direction m = k₁*σ₃k₁; the azimuth of
/// k₂ is absorbed into m.
pub fn lemma_aa_check(pl: &Plancherel, t: f64, r: f64, y: f64, grid: &LemmaGrid) -> Result<LemmaCheck> {
    if pl.model != Model::H3 {
        return Err(Error::Domain("the two-kernel identity is checked on H³".into()));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("t = {t} must be positive")));
    }
    if y.abs() >= FRAC_PI_4 {
        return Err(Error::CrownBoundary(y.abs()));
    }
    let lhs = lemma_lhs(pl.cx, t, r, y, grid)?;
    let rhs = lemma_rhs(pl, t, r, y)?;
    Ok(LemmaCheck { t, r, y, lhs, rhs, rel_gap: (lhs - rhs).abs() / rhs.abs() })
}

fn lemma_lhs(cx: f64, t: f64, r: f64, y: f64, grid: &LemmaGrid) -> Result<f64> {
    let kernel = |h: C64| heat_kernel_h3_closed(cx, 2.0 * t, h.acosh());
    let s_max = r.abs() + 2.0 + 14.0 * t.sqrt();
    let (s_nodes, s_weights) = composite_gauss_legendre(&linspace(grid.radial_panels + 1, 0.0, s_max), |_| 16);
    let (u_nodes, u_weights) = gauss_legendre(grid.n_u, -1.0, 1.0);
    let (c_nodes, c_weights) = gauss_legendre(grid.n_theta, -1.0, 1.0);
    let directions: Vec<([f64; 3], f64)> = c_nodes
        .iter()
        .zip(&c_weights)
        .flat_map(|(&c, &wc)| {
            let sn = (1.0 - c * c).sqrt();
            (0..grid.n_azimuth).map(move |j| {
                let a = 2.0 * PI * j as f64 / grid.n_azimuth as f64;
                ([sn * a.cos(), sn * a.sin(), c], 0.5 * wc / grid.n_azimuth as f64)
            })
        })
        .collect();
    let (c2, s2) = ((2.0 * y).cos(), (2.0 * y).sin());
    let (ch_r, sh_r) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    let i = C64::i();

    let mut total = 0.0;
    let mut edge = 0.0;
    let mut peak: f64 = 0.0;
    let last_panel = s_nodes.len() - 16;
    for (idx, (&s, &ws)) in s_nodes.iter().zip(&s_weights).enumerate() {
        let (es, ch_s, sh_s) = ((2.0 * s).exp(), (2.0 * s).cosh(), (2.0 * s).sinh());
        let mut shell = 0.0;
        for (&u, &wu) in u_nodes.iter().zip(&u_weights) {
            let v = (1.0 - u * u).sqrt();
            // X = a_s (cos 2Y + i sin 2Y n₂·σ) a_s with n₂ = (v, 0, u)
            let x00 = es * (c2 + i * s2 * u);
            let x11 = (c2 - i * s2 * u) / es;
            let x01 = i * s2 * v;
            let tr_x = x00 + x11;
            let second = kernel(C64::new(c2 * ch_s, 0.0) - i * s2 * sh_s * u);
            let mut inner = C64::new(0.0, 0.0);
            for (m, wm) in &directions {
                // tr((m·σ)X) with X symmetric off the diagonal
                let tr_mx = m[2] * (x00 - x11) + 2.0 * m[0] * x01;
                let h = 0.5 * (ch_r * tr_x - sh_r * tr_mx);
                inner += kernel(h) * wm;
            }
            shell += (inner * second).re * 0.5 * wu;
        }
        let contrib = ws * haar_kak_density(Model::H3, s) * shell;
        peak = peak.max(contrib.abs() / ws);
        if idx >= last_panel {
            edge += contrib.abs();
        }
        total += contrib;
    }
    if edge > 1e-10 * total.abs().max(peak) {
        return Err(Error::Cutoff(format!("two-kernel integrand still carries {edge:e} at s = {s_max}")));
    }
    Ok(total)
}

fn lemma_rhs(pl: &Plancherel, t: f64, r: f64, y: f64) -> Result<f64> {
    let ya = y.abs();
    // e^{−4tμ² + 4μ|Y|} falls below e^{−40} past this point
    let top = (4.0 * ya + (16.0 * ya * ya + 640.0 * t).sqrt()) / (8.0 * t);
    let width = (0.5f64).min(1.0 / (1.0 + 2.0 * r.abs()));
    let panels = (top / width).ceil() as usize;
    let (nodes, weights) = composite_gauss_legendre(&linspace(panels + 1, 0.0, top), |_| 16);
    let mut sum = 0.0;
    for (&mu, &w) in nodes.iter().zip(&weights) {
        let at_a = phi_real(Model::H3, mu, r)?;
        let at_y = phi_complex_group(mu, C64::new(0.0, 2.0 * y)).re;
        sum += w * pl.density(mu) * (-4.0 * t * (mu * mu + 1.0)).exp() * at_a * at_y;
    }
    Ok(sum)
}

/// A candidate weight on Ω⁺ = (0, π/4), stored at Gauss–Legendre nodes and
/// extended to Ω as an odd function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightCandidate {
    pub y: Vec<f64>,
    pub quad: Vec<f64>,
    pub values: Vec<f64>,
}

impl WeightCandidate {
    pub fn zero(n: usize) -> Self {
        let (y, quad) = gauss_legendre(n, 0.0, FRAC_PI_4);
        Self { values: vec![0.0; n], y, quad }
    }

    /// W_t = δ(exp 2iY)⁻¹ w_t(Y) with δ(exp 2iY) = sin 4Y.
    pub fn from_heat_weight(t: f64, n: usize) -> Self {
        let (y, quad) = gauss_legendre(n, 0.0, FRAC_PI_4);
        let values = y.iter().map(|&v| heat_weight_ratio(t, v)).collect();
        Self { y, quad, values }
    }

    /// ∫_{Ω⁺}|W|.
    pub fn l1_norm(&self) -> f64 {
        self.values.iter().zip(&self.quad).map(|(v, q)| v.abs() * q).sum()
    }

    /// (1/μ)∫_{Ω⁺} sinh(4μY) W(Y) dY, the folded right side of the weight
    /// equation (the limit 4∫YW at μ = 0).
    pub fn rhs(&self, mu: f64) -> f64 {
        self.y.iter().zip(&self.quad).zip(&self.values).map(|((&y, &q), &v)| fold_kernel(mu, y) * q * v).sum()
    }
}

/// δ(exp 2iY)⁻¹ w_t(Y) for the H³ weight, evaluated at any real Y ≠ 0.
pub fn heat_weight_ratio(t: f64, y: f64) -> f64 {
    weight_w(Model::H3, t, y) / (4.0 * y).sin()
}

fn fold_kernel(mu: f64, y: f64) -> f64 {
    if mu == 0.0 {
        4.0 * y
    } else {
        (4.0 * mu * y).sinh() / mu
    }
}

/// e^{2t(μ²+|ρ|²)} on H³.
fn weight_lhs(t: f64, mu: f64) -> f64 {
    (2.0 * t * (mu * mu + 1.0)).exp()
}

/// Normalized residual |e^{2t(μ²+1)} − RHS_W(μ)|/e^{2t(μ²+1)} at each μ.
pub fn weight_residual_profile(t: f64, w: &WeightCandidate, mus: &[f64]) -> Vec<f64> {
    mus.iter()
        .map(|&mu| {
            let l = weight_lhs(t, mu);
            (l - w.rhs(mu)).abs() / l
        })
        .collect()
}

/// Supremum of [`weight_residual_profile`] over the μ-grid.
pub fn weight_equation_residual(t: f64, w: &WeightCandidate, mus: &[f64]) -> f64 {
    weight_residual_profile(t, w, mus).into_iter().fold(0.0, f64::max)
}

/// Settings of the fit-and-probe experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightFitParams {
    pub t: f64,
    pub mu_fit: f64,
    pub mu_probe: f64,
    pub n_y: usize,
    pub fit_points: usize,
    pub probe_points: usize,
    /// Singular values below rcond·σ_max are discarded.
    pub rcond: f64,
}

impl WeightFitParams {
    pub fn new(t: f64) -> Self {
        Self { t, mu_fit: 4.0, mu_probe: 12.0, n_y: 64, fit_points: 81, probe_points: 161, rcond: 1e-14 }
    }

    pub fn refined(&self, factor: usize) -> Self {
        Self {
            n_y: self.n_y * factor,
            fit_points: (self.fit_points - 1) * factor + 1,
            probe_points: self.probe_points * factor,
            ..*self
        }
    }

    pub fn fit_grid(&self) -> Vec<f64> {
        linspace(self.fit_points, 0.0, self.mu_fit)
    }

    pub fn probe_grid(&self) -> Vec<f64> {
        let h = (self.mu_probe - self.mu_fit) / self.probe_points as f64;
        (1..=self.probe_points).map(|j| self.mu_fit + j as f64 * h).collect()
    }
}

/// Outcome of [`fit_weight`].
#[derive(Debug, Clone, PartialEq)]
pub struct WeightFit {
    pub params: WeightFitParams,
    pub weight: WeightCandidate,
    pub fit_residual: f64,
    pub probe_residual: f64,
    pub fit_profile: Vec<(f64, f64)>,
    pub probe_profile: Vec<(f64, f64)>,
}

/// Signed least-squares weight matching the weight equation in relative
/// terms on [0, μ_fit], probed on (μ_fit, μ_probe].
pub fn fit_weight(params: &WeightFitParams) -> Result<WeightFit> {
    let t = params.t;
    if !(t > 0.0 && params.mu_probe > params.mu_fit && params.mu_fit > 0.0) {
        return Err(Error::Domain("weight fit needs t > 0 and 0 < μ_fit < μ_probe".into()));
    }
    let mut weight = WeightCandidate::zero(params.n_y);
    let fit_mus = params.fit_grid();
    let a = DMatrix::from_fn(fit_mus.len(), params.n_y, |i, j| {
        fold_kernel(fit_mus[i], weight.y[j]) * weight.quad[j] / weight_lhs(t, fit_mus[i])
    });
    let b = DVector::from_element(fit_mus.len(), 1.0);
    let svd = a.svd(true, true);
    let cutoff = params.rcond * svd.singular_values.max();
    let solution = svd.solve(&b, cutoff).map_err(|_| Error::IllConditioned(f64::INFINITY))?;
    weight.values = solution.iter().copied().collect();

    let probe_mus = params.probe_grid();
    let fit_res = weight_residual_profile(t, &weight, &fit_mus);
    let probe_res = weight_residual_profile(t, &weight, &probe_mus);
    let sup = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    Ok(WeightFit {
        params: *params,
        fit_residual: sup(&fit_res),
        probe_residual: sup(&probe_res),
        fit_profile: fit_mus.into_iter().zip(fit_res).collect(),
        probe_profile: probe_mus.into_iter().zip(probe_res).collect(),
        weight,
    })
}

/// Envelope sup_W |RHS_W(μ)| ≤ L·sinh(πμ)/μ for ∫_{Ω⁺}|W| ≤ L.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeParams {
    /// Bound L on ∫_{Ω⁺}|W|.
    pub l1_bound: f64,
    /// Exponential rate of the envelope: 4·sup Ω⁺ = π.
    pub rate: f64,
    /// Polynomial degree of the c-function factor.
    pub c_degree: i32,
    /// Spacing of the μ-grid searched for μ*.
    pub mu_step: f64,
}

impl EnvelopeParams {
    pub fn new(l1_bound: f64) -> Self {
        Self { l1_bound, rate: PI, c_degree: -1, mu_step: 0.01 }
    }

    /// ln of the envelope at μ.
    pub fn ln_envelope(&self, mu: f64) -> f64 {
        let ln_fold = if mu * self.rate < 1e-8 {
            self.rate.ln()
        } else {
            // ln(sinh(aμ)/μ) = aμ + ln(1 − e^{−2aμ}) − ln 2 − ln μ
            let a = self.rate * mu;
            a + (-(-2.0 * a).exp()).ln_1p() - 2f64.ln() - mu.ln()
        };
        self.l1_bound.ln() + ln_fold
    }
}

/// The growth-mismatch certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub t: f64,
    pub mu_star: f64,
    /// e^{2t(μ*²+1)} divided by the envelope at μ*.
    pub ratio: f64,
    pub envelope_params: EnvelopeParams,
    /// The ratio at 2μ*.
    pub ratio_at_double: f64,
    /// Strict increase of the ratio on the grid from μ* to 2μ*.
    pub monotone: bool,
}

/// ln(LHS/envelope) at μ.
pub fn ln_growth_ratio(t: f64, env: &EnvelopeParams, mu: f64) -> f64 {
    2.0 * t * (mu * mu + 1.0) - env.ln_envelope(mu)
}

/// Smallest grid μ* with e^{2t(μ²+1)} ≥ 10⁶ × envelope, for the envelope
/// with ∫|W| ≤ `l1_bound`.
pub fn growth_mismatch_certificate(t: f64, l1_bound: f64) -> Result<Certificate> {
    if !(t > 0.0 && t.is_finite() && l1_bound > 0.0) {
        return Err(Error::Domain(format!("certificate needs t > 0 and a positive bound, got t = {t}")));
    }
    let env = EnvelopeParams::new(l1_bound);
    let threshold = 1e6f64.ln();
    let mut k = 0usize;
    let mu_star = loop {
        let mu = k as f64 * env.mu_step;
        if ln_growth_ratio(t, &env, mu) >= threshold {
            break mu;
        }
        k += 1;
        if k > 100_000_000 {
            return Err(Error::NonConvergence("no μ* below 10⁶".into()));
        }
    };
    let mut monotone = true;
    let mut prev = ln_growth_ratio(t, &env, mu_star);
    let steps = (mu_star / env.mu_step).round() as usize;
    for j in 1..=steps.max(1) {
        let cur = ln_growth_ratio(t, &env, mu_star + j as f64 * env.mu_step);
        monotone &= cur > prev;
        prev = cur;
    }
    Ok(Certificate {
        t,
        mu_star,
        ratio: ln_growth_ratio(t, &env, mu_star).exp(),
        ratio_at_double: ln_growth_ratio(t, &env, 2.0 * mu_star).exp(),
        envelope_params: env,
        monotone,
    })
}
