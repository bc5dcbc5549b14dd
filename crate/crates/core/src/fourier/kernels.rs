//! Mode kernels of a(b·x)^{ρ−λ} for x at distance 2r from the base point:
//! κ_n(r, ρ₁ − iμ) = (1/2π)∫ q(γ)^{−(ρ₁−iμ)} e^{−inγ} dγ on the circle and
//! κ_l(r, ρ₁ − iμ) = ½∫ q(c)^{−(ρ₁−iμ)} P_l(c) dc on the sphere, where
//! q = cosh 2r − sinh 2r·cos γ (resp. c). The kernels of a(b·x)^{ρ+λ} are
//! their complex conjugates.

use std::f64::consts::PI;

use crate::models::Model;
use crate::quadrature::{composite_gauss_legendre, graded_edges, legendre_polys};
use crate::C64;

/// Nodes, weights (normalized measure), q-values and basis rows of the
/// projection onto degrees 0..=deg_max.
struct Projection {
    weights: Vec<f64>,
    q: Vec<f64>,
    basis: Vec<Vec<f64>>,
}

fn circle_projection(r: f64, deg_max: usize, mu_max: f64) -> Projection {
    let (ch, sh) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    // q(γ) ≈ e^{−2r} + e^{2r}γ²/4 near γ = 0
    let scale = (2.0 * (-2.0 * r).exp()).min(0.5 * PI);
    let edges = graded_edges(0.0, PI, scale, PI);
    let extra = 20 + (0.5 * mu_max).ceil() as usize;
    let (nodes, weights) = composite_gauss_legendre(&edges, |w| extra + (0.75 * deg_max as f64 * w).ceil() as usize);
    let q = nodes.iter().map(|g| ch - sh * g.cos()).collect();
    let basis = (0..=deg_max).map(|n| nodes.iter().map(|g| (n as f64 * g).cos()).collect()).collect();
    Projection { weights: weights.iter().map(|w| w / PI).collect(), q, basis }
}

fn sphere_projection(r: f64, deg_max: usize, mu_max: f64) -> Projection {
    // u = (1 − c)/2 ∈ [0, 1], q = e^{−2r} + 2u·sinh 2r, measure ½dc = du
    let sh = (2.0 * r).sinh();
    let scale = if sh > 0.0 { ((-2.0 * r).exp() / (2.0 * sh)).min(0.5) } else { 0.5 };
    let edges = graded_edges(0.0, 1.0, scale, 1.0);
    let per = 20 + deg_max + (0.5 * mu_max).ceil() as usize;
    let (nodes, weights) = composite_gauss_legendre(&edges, |_| per);
    let q = nodes.iter().map(|u| (-2.0 * r).exp() + 2.0 * u * sh).collect();
    let polys: Vec<Vec<f64>> = nodes.iter().map(|u| legendre_polys(deg_max, 1.0 - 2.0 * u)).collect();
    let basis = (0..=deg_max).map(|l| polys.iter().map(|p| p[l]).collect()).collect();
    Projection { weights, q, basis }
}

/// κ_deg(r, ρ₁ − iμ_k) for deg = 0..=deg_max, laid out as [deg][k].
pub fn mode_kernels(model: Model, r: f64, mus: &[f64], deg_max: usize) -> Vec<Vec<C64>> {
    let mu_max = mus.iter().fold(0.0f64, |a, m| a.max(m.abs()));
    let proj = match model {
        Model::H2 => circle_projection(r, deg_max, mu_max),
        Model::H3 => sphere_projection(r, deg_max, mu_max),
    };
    let rho1 = model.rho1();
    let base: Vec<f64> = proj.q.iter().zip(&proj.weights).map(|(q, w)| w * q.powf(-rho1)).collect();
    let logq: Vec<f64> = proj.q.iter().map(|q| q.ln()).collect();
    let mut out = vec![vec![C64::new(0.0, 0.0); mus.len()]; deg_max + 1];
    let mut v = vec![C64::new(0.0, 0.0); base.len()];
    for (k, mu) in mus.iter().enumerate() {
        for p in 0..base.len() {
            v[p] = C64::from_polar(base[p], mu * logq[p]);
        }
        for (deg, row) in proj.basis.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (b, x) in row.iter().zip(&v) {
                acc += x * *b;
            }
            out[deg][k] = acc;
        }
    }
    out
}
