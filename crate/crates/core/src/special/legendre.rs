//! Conical Legendre functions P_{−1/2+iμ}(x) on ℂ ∖ (−∞, −1].
//!
//! Near x = 1 the hypergeometric series in w = (1−x)/2 is summed directly.
//! Elsewhere the Legendre equation (1−x²)y'' − 2xy' + ν(ν+1)y = 0 is
//! integrated by Taylor steps along the ray from 1 to x, starting from
//! series data close to 1. The ray never meets the cut unless x does.

use crate::error::{Error, Result};
use crate::C64;

const CUT_DISTANCE: f64 = 1e-6;
const MAX_TAYLOR_TERMS: usize = 600;

fn distance_to_cut(x: C64) -> f64 {
    if x.re <= -1.0 {
        x.im.abs()
    } else {
        (x + 1.0).norm()
    }
}

/// Series value and x-derivative of ₂F₁(½−iμ, ½+iμ; 1; w) at w = (1−x)/2.
fn series_at(mu: f64, w: C64) -> Result<(C64, C64)> {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut dsum = C64::new(0.0, 0.0);
    for k in 0..4000 {
        let kf = k as f64;
        // coefficient ratio ((k+½)² + μ²)/(k+1)², real
        let ratio = ((kf + 0.5) * (kf + 0.5) + mu * mu) / ((kf + 1.0) * (kf + 1.0));
        let next = term * ratio * w;
        // d/dw of w^{k+1} term is (k+1) w^k
        dsum += term * ratio * (kf + 1.0);
        term = next;
        sum += term;
        if k > 3 && term.norm() * (kf + 2.0) <= 1e-17 * (sum.norm() + dsum.norm() * w.norm()) {
            // dy/dx = −½ dF/dw
            return Ok((sum, -0.5 * dsum));
        }
    }
    Err(Error::NonConvergence(format!("conical series at w = {w}")))
}

/// One Taylor step of the Legendre equation from x0 with data (y, y').
/// Works with the scaled coefficients b_m = a_m·h^m to avoid overflow.
fn taylor_step(nu_nu1: f64, x0: C64, y: C64, dy: C64, h: C64) -> Result<(C64, C64)> {
    let lead = 1.0 - x0 * x0;
    let mut b_prev = y;
    let mut b_cur = dy * h;
    let mut sum = b_prev + b_cur;
    let mut dsum = b_cur;
    let mut quiet = 0;
    for m in 0..MAX_TAYLOR_TERMS {
        let mf = m as f64;
        let b_next = (2.0 * x0 * (mf + 1.0) * (mf + 1.0) * b_cur * h + (mf * (mf + 1.0) - nu_nu1) * b_prev * h * h)
            / (lead * (mf + 2.0) * (mf + 1.0));
        let dterm = b_next * (mf + 2.0);
        sum += b_next;
        dsum += dterm;
        if b_next.norm() <= 1e-17 * sum.norm() && dterm.norm() <= 1e-17 * dsum.norm() {
            quiet += 1;
            if quiet >= 3 {
                return Ok((sum, dsum / h));
            }
        } else {
            quiet = 0;
        }
        b_prev = b_cur;
        b_cur = b_next;
    }
    Err(Error::NonConvergence(format!("Legendre Taylor step at x = {x0}")))
}

/// P_{−1/2+iμ}(x) together with its derivative in x.
pub fn legendre_conical_with_derivative(mu: f64, x: C64) -> Result<(C64, C64)> {
    if !(mu.is_finite() && x.re.is_finite() && x.im.is_finite()) {
        return Err(Error::Domain("non-finite Legendre argument".into()));
    }
    if distance_to_cut(x) < CUT_DISTANCE {
        return Err(Error::BranchCut { re: x.re, im: x.im });
    }
    let mu = mu.abs();
    let w = (1.0 - x) * 0.5;
    let direct_radius = (4.0 / (1.0 + mu * mu)).min(0.7);
    if w.norm() <= direct_radius {
        return series_at(mu, w);
    }
    // start on the ray from 1 towards x, inside the well-conditioned disk
    let dir = (x - 1.0) / (x - 1.0).norm();
    let start_radius = (1.0 / (1.0 + mu * mu)).min(0.6);
    let mut p = C64::new(1.0, 0.0) + dir * (2.0 * start_radius);
    let (mut y, mut dy) = series_at(mu, (1.0 - p) * 0.5)?;
    let nu_nu1 = -0.25 - mu * mu;
    let mu_eff = mu.max(1.0);
    for _ in 0..100_000 {
        let remaining = x - p;
        let rem = remaining.norm();
        if rem == 0.0 {
            return Ok((y, dy));
        }
        let radius = (p - 1.0).norm().min((p + 1.0).norm());
        let oscillation = 2.0 * (p * p - 1.0).norm().sqrt() / mu_eff;
        let hmax = (0.5 * radius).min(oscillation);
        let h = if rem <= hmax { remaining } else { remaining / rem * hmax };
        let (ny, ndy) = taylor_step(nu_nu1, p, y, dy, h)?;
        y = ny;
        dy = ndy;
        p += h;
        if rem <= hmax {
            return Ok((y, dy));
        }
    }
    Err(Error::NonConvergence(format!("Legendre continuation to x = {x}")))
}

/// Conical Legendre function P_{−1/2+iμ}(x).
pub fn legendre_conical(mu: f64, x: C64) -> Result<C64> {
    legendre_conical_with_derivative(mu, x).map(|(y, _)| y)
}
