//! Spherical functions of SL(2,ℝ) along G-orbits through exp(iφ)·x_o with
//! π/4 < φ < π/2, which leave X̂_{ℂ,2Ω} through P = −2.

use std::f64::consts::FRAC_PI_4;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::{
    boundary_curve_point, boundary_curve_sigma, in_hat_domain, p_function, random_h2, CrownPoint, HatDomain,
};
use crate::special::legendre_conical;
use crate::C64;

/// Φ_λ along the curve s ↦ γ(s)·exp(iφ)·x_o.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveScan {
    pub mu: f64,
    pub phi: f64,
    pub sgrid: Vec<f64>,
    #[serde(skip)]
    pub sigma: Vec<C64>,
    #[serde(skip)]
    pub values: Vec<C64>,
    /// Largest |Im σ| over the scan.
    pub sigma_imag: f64,
    pub sigma_decreasing: bool,
    pub positive: bool,
    /// Φ increasing along the grid.
    pub increasing: bool,
}

impl CurveScan {
    /// Last value over first value.
    pub fn growth(&self) -> f64 {
        self.values[self.values.len() - 1].re / self.values[0].re
    }

    /// Rows (s, σ, Φ) with real parts.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.sgrid.iter().zip(&self.sigma).zip(&self.values).map(|((&s, sg), v)| (s, sg.re, v.re))
    }
}

/// Geometric ladder s_k = 1 − 10^{−k}, k = 0, …, n, starting at s = 0.
pub fn geometric_ladder(n: usize) -> Vec<f64> {
    (0..=n).map(|k| 1.0 - 10f64.powi(-(k as i32))).collect()
}

/// Evaluates σ(s) and Φ_λ(σ(s)) = P_{−1/2+iμ}(σ(s)/2) on `sgrid`.
pub fn phi_along_curve(mu: f64, phi: f64, sgrid: &[f64]) -> Result<CurveScan> {
    if let Some(&s) = sgrid.iter().find(|&&s| !(0.0..=1.0 - 1e-4).contains(&s)) {
        return Err(Error::Domain(format!("s = {s} outside [0, 1 − 1e−4]")));
    }
    if sgrid.is_empty() {
        return Err(Error::Domain("empty s-grid".into()));
    }
    let mut sigma = Vec::with_capacity(sgrid.len());
    let mut values = Vec::with_capacity(sgrid.len());
    for &s in sgrid {
        let sg = boundary_curve_sigma(phi, s)?;
        values.push(legendre_conical(mu, 0.5 * sg)?);
        sigma.push(sg);
    }
    let sigma_imag = sigma.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let sigma_decreasing = sigma.windows(2).all(|w| w[1].re < w[0].re);
    let positive = values.iter().all(|v| v.re > 0.0 && v.im.abs() <= 1e-10 * v.re);
    let increasing = values.windows(2).all(|w| w[1].re > w[0].re);
    Ok(CurveScan { mu, phi, sgrid: sgrid.to_vec(), sigma, values, sigma_imag, sigma_decreasing, positive, increasing })
}

/// Where the σ-curve for one φ ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveExit {
    pub phi: f64,
    pub sigma_start: f64,
    pub sigma_end: f64,
    /// |σ(1) + 2| ≤ 10⁻¹²: the curve ends on the boundary of X̂_{ℂ,2Ω}.
    pub end_on_boundary: bool,
    /// Continuing the curve to s = 1.05 stays outside.
    pub beyond_outside: bool,
}

/// Outcome of [`crown_inclusion_scan`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionReport {
    pub samples: usize,
    pub inside_two_omega: usize,
    pub inside_omega: usize,
    pub exits: Vec<CurveExit>,
    /// min Re P over g·exp(iY)·x_o with |Y| = π/4 − 10⁻³.
    pub boundary_min_re_p: f64,
}

impl InclusionReport {
    pub fn all_inside(&self) -> bool {
        self.inside_two_omega == self.samples && self.inside_omega == self.samples
    }

    pub fn all_exit(&self) -> bool {
        self.exits.iter().all(|e| e.end_on_boundary && e.beyond_outside)
    }
}

/// Angles used for the exits from X̂_{ℂ,2Ω}.
pub const EXIT_ANGLES: [f64; 3] = [0.3 * std::f64::consts::PI, 3.0 * FRAC_PI_4 / 2.0, 0.45 * std::f64::consts::PI];

/// Samples g·exp(iY)·x_o with Y ∈ Ω against both P-domains, follows the
/// σ-curves out of X̂_{ℂ,2Ω}, and scans Re P just inside ∂Ω.
pub fn crown_inclusion_scan(nsamples: usize, seed: u64) -> Result<InclusionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut two, mut one) = (0, 0);
    for _ in 0..nsamples {
        let g = random_h2(&mut rng, 3.0);
        let y = rng.random_range(-FRAC_PI_4..FRAC_PI_4);
        let z = CrownPoint::complexified(g, y);
        two += in_hat_domain(&z, HatDomain::TwoOmega)? as usize;
        one += in_hat_domain(&z, HatDomain::Omega)? as usize;
    }
    let mut exits = Vec::new();
    for &phi in &EXIT_ANGLES {
        let end = boundary_curve_point(phi, 1.0)?;
        let beyond = boundary_curve_point(phi, 1.05)?;
        exits.push(CurveExit {
            phi,
            sigma_start: boundary_curve_sigma(phi, 0.0)?.re,
            sigma_end: p_function(&end).re,
            end_on_boundary: (p_function(&end) + 2.0).norm() <= 1e-12,
            beyond_outside: !in_hat_domain(&beyond, HatDomain::TwoOmega)?,
        });
    }
    let mut boundary_min_re_p = f64::INFINITY;
    for j in 0..nsamples.max(1) {
        let g = random_h2(&mut rng, 3.0);
        let y = if j % 2 == 0 { FRAC_PI_4 - 1e-3 } else { -FRAC_PI_4 + 1e-3 };
        boundary_min_re_p = boundary_min_re_p.min(p_function(&CrownPoint::complexified(g, y)).re);
    }
    Ok(InclusionReport { samples: nsamples, inside_two_omega: two, inside_omega: one, exits, boundary_min_re_p })
}
