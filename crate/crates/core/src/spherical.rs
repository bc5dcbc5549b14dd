//! Spherical functions, the symmetrized exponentials ψ_λ, the c-function and
//! the Plancherel density.
//!
//! Spectral parameters are λ = iμ with μ ≥ 0 and λ(Z) = iμZ, where Z is
//! measured in the metric coordinate of 𝔞 (|H₀| = 2). A crown coordinate Y
//! therefore enters ψ as Z = 2Y, and exp(i2Y) as Z = i4Y.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::models::{CrownPoint, Model};
use crate::quadrature::{gauss_legendre, graded_gauss_legendre};
use crate::special::{legendre_conical, ln_gamma_complex};
use crate::C64;

/// Plancherel normalization c_X for which the inversion formula holds with
/// the measure c_X·|c(μ)|⁻² dμ on μ ≥ 0 and normalized db.
pub fn analytic_cx(_model: Model) -> f64 {
    1.0 / (2.0 * PI * PI)
}

/// Harish-Chandra c-function c(iμ).
/// H²: Γ(iμ)/(√π Γ(½+iμ)); H³: 1/(iμ).
pub fn c_function(model: Model, mu: f64) -> Result<C64> {
    match model {
        Model::H2 => {
            let ln = ln_gamma_complex(C64::new(0.0, mu))?
                - ln_gamma_complex(C64::new(0.5, mu))?
                - 0.5 * PI.ln();
            Ok(ln.exp())
        }
        Model::H3 => {
            if mu == 0.0 {
                return Err(Error::Domain("c(0) is infinite".into()));
            }
            Ok(C64::new(0.0, -1.0 / mu))
        }
    }
}

/// |c(iμ)|⁻², zero at μ = 0.
pub fn inverse_c_squared(model: Model, mu: f64) -> f64 {
    let mu = mu.abs();
    if mu == 0.0 {
        return 0.0;
    }
    match model {
        Model::H2 => {
            // π |Γ(½+iμ)|² / |Γ(iμ)|², through log Γ
            let ln = ln_gamma_complex(C64::new(0.5, mu)).expect("no pole")
                - ln_gamma_complex(C64::new(0.0, mu)).expect("no pole");
            PI * (2.0 * ln.re).exp()
        }
        Model::H3 => mu * mu,
    }
}

/// Plancherel density c_X·|c(iμ)|⁻² with a fixed constant c_X.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plancherel {
    pub model: Model,
    pub cx: f64,
}

impl Plancherel {
    pub fn new(model: Model, cx: f64) -> Self {
        Self { model, cx }
    }

    pub fn analytic(model: Model) -> Self {
        Self { model, cx: analytic_cx(model) }
    }

    pub fn density(&self, mu: f64) -> f64 {
        self.cx * inverse_c_squared(self.model, mu)
    }
}

/// ψ_λ(Z) = e^{iμZ} + e^{−iμZ}.
pub fn psi(mu: f64, z: C64) -> C64 {
    let e = (C64::i() * mu * z).exp();
    e + 1.0 / e
}

/// H³ spherical function in terms of L = log a (coefficient of H₀):
/// φ = c(λ)/δ(a)·Σ ε(w) e^{λ(w log a)} = sin(2μL)/(μ sinh 2L),
/// with δ(a) = 2 sinh 2L and a degree-6 Taylor quotient when |δ| < 1e−6.
pub fn phi_complex_group(mu: f64, log_a: C64) -> C64 {
    let x = 2.0 * log_a;
    let delta = 2.0 * x.sinh();
    if delta.norm() < 1e-6 {
        let u = mu * x;
        let (u2, x2) = (u * u, x * x);
        let num = 1.0 - u2 / 6.0 + u2 * u2 / 120.0 - u2 * u2 * u2 / 5040.0;
        let den = 1.0 + x2 / 6.0 + x2 * x2 / 120.0 + x2 * x2 * x2 / 5040.0;
        return num / den;
    }
    if mu == 0.0 {
        return x / x.sinh();
    }
    let sum_w = (C64::i() * mu * x).exp() - (-C64::i() * mu * x).exp();
    let c = C64::new(0.0, -1.0 / mu);
    c * sum_w / delta
}

/// Spherical function as a function of the half-trace w of the Gram
/// matrix (cosh of the distance on real points):
/// H²: P_{−1/2+iμ}(w); H³: sin(μs)/(μ sinh s) with s = arccosh w.
pub fn phi_invariant(model: Model, mu: f64, w: C64) -> Result<C64> {
    match model {
        Model::H2 => legendre_conical(mu, w),
        Model::H3 => {
            if w.im.abs() <= 1e-6 && w.re <= -1.0 {
                return Err(Error::BranchCut { re: w.re, im: w.im });
            }
            Ok(phi_complex_group(mu, 0.5 * w.acosh()))
        }
    }
}

/// φ_λ(z) through the K_ℂ-invariant half-trace.
pub fn phi_at(mu: f64, z: &CrownPoint) -> Result<C64> {
    phi_invariant(z.model, mu, z.half_trace())
}

/// Number of trapezoid nodes that resolves the periodic kernel
/// (cosh w − sinh w cos β)^{−s} to double precision.
pub fn periodic_nodes(w: C64, mu: f64) -> usize {
    let ratio = w.cosh() / w.sinh();
    let decay = if w.norm() < 1e-8 { f64::INFINITY } else { ratio.acos().im.abs() };
    let mut n = if mu > 20.0 { 2048 } else { 1024 };
    while (n as f64) * decay < 40.0 + 4.0 * mu.abs() && n < (1 << 22) {
        n *= 2;
    }
    n
}

/// (1/2π)∫₀^{2π} (cosh w − sinh w cos β)^{−(½+iμ)} dβ by the periodic
/// trapezoid rule (principal branch).
fn h2_k_integral(mu: f64, w: C64) -> C64 {
    let n = periodic_nodes(w, mu);
    let (ch, sh) = (w.cosh(), w.sinh());
    let expo = C64::new(-0.5, -mu);
    let mut sum = C64::new(0.0, 0.0);
    for j in 0..n {
        let beta = 2.0 * PI * j as f64 / n as f64;
        sum += ((ch - sh * beta.cos()).ln() * expo).exp();
    }
    sum / n as f64
}

/// ∫_{S²} (cosh w + sinh w·cos θ)^{−(1+iμ)} dω/4π in the variable
/// ζ = log q, where the integrand is e^{−iμζ}.
fn h3_k_integral(mu: f64, w: C64) -> C64 {
    if w.norm() < 1e-12 {
        return C64::new(1.0, 0.0);
    }
    // q = cosh w + sinh w·x, x ∈ [−1, 1]; dω/4π = dx/2
    let (ch, sh) = (w.cosh(), w.sinh());
    let scale_left = ((-w).exp().norm() / sh.norm()).min(1.0);
    let scale_right = (w.exp().norm() / sh.norm()).min(1.0);
    let (nodes, weights) = graded_gauss_legendre(-1.0, 1.0, scale_left, scale_right, 24);
    let expo = C64::new(-1.0, -mu);
    let mut sum = C64::new(0.0, 0.0);
    for (x, wt) in nodes.iter().zip(&weights) {
        let q = ch + sh * x;
        sum += (q.ln() * expo).exp() * (0.5 * wt);
    }
    sum
}

/// φ_λ(a_r·x_o). H² uses the Legendre realization, H³ the closed form.
pub fn phi_real(model: Model, mu: f64, r: f64) -> Result<f64> {
    if r < 0.0 {
        return Err(Error::Domain(format!("r = {r} < 0")));
    }
    match model {
        Model::H2 => Ok(legendre_conical(mu, C64::new((2.0 * r).cosh(), 0.0))?.re),
        Model::H3 => Ok(phi_complex_group(mu, C64::new(r, 0.0)).re),
    }
}

/// φ_λ(a_r·x_o) by quadrature of ∫_K a(k a_r)^{ρ+λ} dk.
pub fn phi_real_kintegral(model: Model, mu: f64, r: f64) -> f64 {
    let w = C64::new(2.0 * r, 0.0);
    match model {
        Model::H2 => h2_k_integral(mu, -w).re,
        Model::H3 => h3_k_integral_real(mu, r),
    }
}

/// H³ real K-integral in the smooth variable ζ = log q ∈ [−2r, 2r].
fn h3_k_integral_real(mu: f64, r: f64) -> f64 {
    if r == 0.0 {
        return 1.0;
    }
    let (nodes, weights) = gauss_legendre(128, -2.0 * r, 2.0 * r);
    // u = |p|² ↦ q = u e^{2r} + (1−u) e^{−2r}, du = e^ζ dζ / (2 sinh 2r)
    let sum: f64 = nodes.iter().zip(&weights).map(|(z, w)| (mu * z).cos() * w).sum();
    sum / (2.0 * (2.0 * r).sinh())
}

/// φ_λ(a_u·exp(i2Y)·x_o).
///
/// u = 0: ∫_K |a(k exp(iY))^{ρ+λ}|² dk, which is real and positive.
/// |Y| < π/8 (the point lies in the crown): the K-integral of
/// a(k a_u exp(i2Y))^{ρ+λ} with the principal branch.
/// Otherwise the invariant realization φ = Φ(half-trace).
pub fn phi_crown(model: Model, mu: f64, y: f64, u: f64) -> Result<C64> {
    if y.abs() >= FRAC_PI_4 - 1e-9 {
        return Err(Error::CrownBoundary(y.abs()));
    }
    if u == 0.0 {
        return Ok(C64::new(abs_square_k_integral(model, mu, y), 0.0));
    }
    // Gram matrix diag(e^{w}, e^{−w}) with w = 2u + 4iY
    let w = C64::new(2.0 * u, 4.0 * y);
    if 2.0 * y.abs() < FRAC_PI_4 {
        Ok(match model {
            Model::H2 => h2_k_integral(mu, -w),
            Model::H3 => h3_k_integral(mu, -w),
        })
    } else {
        phi_invariant(model, mu, w.cosh())
    }
}

/// ∫_K |a(k exp(iY)·x_o)^{ρ+λ}|² dk = ∫ |q|^{−2ρ₁} e^{2μ arg q} dk
/// with q = sin²(β/2)e^{2iY} + cos²(β/2)e^{−2iY} (H²) or
/// q = x e^{2iY} + (1−x) e^{−2iY}, x uniform on [0, 1] (H³).
pub fn abs_square_k_integral(model: Model, mu: f64, y: f64) -> f64 {
    let e = C64::from_polar(1.0, 2.0 * y);
    let rho1 = model.rho1();
    let f = |x: f64| {
        let q = e * x + e.conj() * (1.0 - x);
        q.norm().powf(-2.0 * rho1) * (2.0 * mu * q.arg()).exp()
    };
    match model {
        Model::H2 => {
            let n = 2048;
            (0..n)
                .map(|j| {
                    let beta = 2.0 * PI * j as f64 / n as f64;
                    f((0.5 * beta).sin().powi(2))
                })
                .sum::<f64>()
                / n as f64
        }
        Model::H3 => {
            let (nodes, weights) = gauss_legendre(256, 0.0, 1.0);
            nodes.iter().zip(&weights).map(|(x, w)| f(*x) * w).sum()
        }
    }
}

/// Result of [`esa_bound_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct EsaBound {
    pub c_y: f64,
    pub ok: bool,
    pub ratios: Vec<f64>,
}

/// C_Y = max over the μ-grid of φ_λ(exp(i2Y))/ψ_λ(i2Y); `ok` when the ratio
/// shows no growth over the top decade of the grid.
pub fn esa_bound_check(model: Model, mugrid: &[f64], y: f64) -> Result<EsaBound> {
    if y.abs() >= FRAC_PI_4 {
        return Err(Error::CrownBoundary(y.abs()));
    }
    let ratios = mugrid
        .iter()
        .map(|&mu| {
            let phi = phi_invariant(model, mu, C64::new((4.0 * y).cos(), 0.0))?;
            Ok(phi.re / psi(mu, C64::new(0.0, 4.0 * y)).re)
        })
        .collect::<Result<Vec<f64>>>()?;
    let c_y = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mu_max = mugrid.iter().copied().fold(0.0, f64::max);
    let top: Vec<f64> = mugrid
        .iter()
        .zip(&ratios)
        .filter(|(m, _)| **m >= 0.1 * mu_max)
        .map(|(_, r)| *r)
        .collect();
    let ok = match (top.first(), top.last()) {
        (Some(first), Some(last)) => *last <= first * (1.0 + 1e-9),
        _ => true,
    };
    Ok(EsaBound { c_y, ok, ratios })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_values() {
        for model in [Model::H2, Model::H3] {
            for &mu in &[0.0, 0.7, 5.0] {
                assert!((phi_real(model, mu, 0.0).unwrap() - 1.0).abs() < 1e-12);
            }
        }
        assert!((psi(0.3, C64::new(0.0, 0.0)) - 2.0).norm() < 1e-15);
        assert!((psi(1.0, C64::new(0.0, 1.0)) - 2.0 * 1f64.cosh()).norm() < 1e-14);
    }

    #[test]
    fn h3_zero_parameter_limit() {
        for &r in &[0.1, 0.5, 2.0] {
            let v = phi_real(Model::H3, 0.0, r).unwrap();
            assert!((v - 2.0 * r / (2.0 * r).sinh()).abs() < 1e-14);
            assert!((phi_real_kintegral(Model::H3, 0.0, r) - v).abs() < 1e-12);
        }
    }

    #[test]
    fn density_values() {
        for model in [Model::H2, Model::H3] {
            assert_eq!(inverse_c_squared(model, 0.0), 0.0);
        }
        let p = Plancherel::analytic(Model::H3);
        assert!((p.density(2.6) / p.density(1.3) - 4.0).abs() < 1e-14);
        for &mu in &[0.3, 2.0, 15.0] {
            let exact = PI * mu * (PI * mu).tanh();
            assert!((inverse_c_squared(Model::H2, mu) - exact).abs() < 1e-12 * exact);
        }
    }

    #[test]
    fn small_delta_series_is_continuous() {
        for &mu in &[0.0, 1.0, 7.0] {
            let l = C64::new(2.4e-7, 1e-8);
            let a = phi_complex_group(mu, l);
            let x = 2.0 * l;
            let direct = if mu == 0.0 { x / x.sinh() } else { (mu * x).sin() / (mu * x.sinh()) };
            assert!((a - direct).norm() < 1e-12);
            let c = phi_complex_group(mu, C64::new(1e-3, 0.0));
            assert!((a - c).norm() < 1e-4 * (1.0 + mu * mu));
        }
    }

    #[test]
    fn esa_at_zero_is_half() {
        let grid: Vec<f64> = (0..50).map(|k| k as f64 * 0.5).collect();
        let b = esa_bound_check(Model::H2, &grid, 0.0).unwrap();
        assert!((b.c_y - 0.5).abs() < 1e-12);
    }
}
