use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Both evaluations of ∫ ψ_λ(i2Y) w_t(Y) dY.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiMoment {
    pub closed_form: f64,
    pub quadrature: f64,
}

impl PsiMoment {
    pub fn rel_gap(&self) -> f64 {
        (self.quadrature - self.closed_form).abs() / self.closed_form.abs()
    }
}

/// Upper bound for the Gaussian tail mass beyond `k` standard deviations.
fn gaussian_tail(k: f64) -> f64 {
    if k <= 1.0 {
        return 1.0;
    }
    (-0.5 * k * k).exp() / (k * (2.0 * PI).sqrt())
}

/// ∫ ψ_λ(i2Y) w_t(Y) dY on the window |Y| ≤ 2μt + 12√t.
pub fn gaussian_psi_moment(t: f64, mu: f64, rho2: f64, n: usize) -> Result<PsiMoment> {
    let half_width = 2.0 * mu.abs() * t + 12.0 * t.sqrt();
    gaussian_psi_moment_windowed(t, mu, rho2, n, half_width)
}

/// Same moment on an explicit window |Y| ≤ `half_width`; fails if the
/// Gaussian mass outside the window exceeds 1e−14.
pub fn gaussian_psi_moment_windowed(
    t: f64,
    mu: f64,
    rho2: f64,
    n: usize,
    half_width: f64,
) -> Result<PsiMoment> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t = {t} must be positive")));
    }
    if n != 1 {
        return Err(Error::Domain(format!("dim a = {n} is not supported (rank one only)")));
    }
    let mu = mu.abs();
    let sd = t.sqrt();
    // the two exponential branches are Gaussians centred at ±2μt
    let k = (half_width - 2.0 * mu * t) / sd;
    let tail = 2.0 * gaussian_tail(k);
    if tail > 1e-14 {
        return Err(Error::QuadratureWindow(tail));
    }
    let h = sd / 6.0;
    let m = (half_width / h).ceil() as i64;
    let h = half_width / m as f64;
    let prefactor = 0.5 * (2.0 * t * rho2).exp() / (2.0 * PI * t).sqrt();
    let mut sum = 0.0;
    for j in -m..=m {
        let y = j as f64 * h;
        let wt = if j.abs() == m { 0.5 } else { 1.0 };
        let psi = (2.0 * mu * y - y * y / (2.0 * t)).exp() + (-2.0 * mu * y - y * y / (2.0 * t)).exp();
        sum += wt * psi;
    }
    Ok(PsiMoment {
        closed_form: (2.0 * t * (mu * mu + rho2)).exp(),
        quadrature: prefactor * sum * h,
    })
}
