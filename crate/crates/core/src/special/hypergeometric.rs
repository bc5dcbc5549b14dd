//! Gauss hypergeometric function ₂F₁(a, b; c; w) by its power series,
//! extended to the half plane Re w < 1/2 with the Pfaff transformation.

use crate::error::{Error, Result};
use crate::C64;

const SERIES_RADIUS: f64 = 0.7;
const MAX_TERMS: usize = 2000;

fn series(a: C64, b: C64, c: C64, w: C64) -> Result<C64> {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let denom = (c + kf) * (kf + 1.0);
        if denom.norm() == 0.0 {
            return Err(Error::Domain("c is a nonpositive integer".into()));
        }
        term *= (a + kf) * (b + kf) / denom * w;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() && k > 2 {
            return Ok(sum);
        }
        if term.norm() == 0.0 {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence(format!("2F1 series at w = {w}")))
}

/// ₂F₁(a, b; c; w) for |w| ≤ 0.7, or via
/// F(a,b;c;w) = (1−w)^{−a} F(a, c−b; c; w/(w−1)) when that maps w into the
/// series disk.
pub fn hyp2f1(a: C64, b: C64, c: C64, w: C64) -> Result<C64> {
    if w.norm() <= SERIES_RADIUS {
        return series(a, b, c, w);
    }
    let v = w / (w - 1.0);
    if v.norm() <= SERIES_RADIUS {
        let f = series(a, c - b, c, v)?;
        return Ok((1.0 - w).powc(-a) * f);
    }
    Err(Error::NonConvergence(format!(
        "2F1 argument w = {w} outside the series and Pfaff regions"
    )))
}
