//! Mode kernels of a(b·z)^{ρ+λ} at complex points z:
//! κ̃_n(z, μ) = (1/2π)∫ q(β, z)^{−(ρ₁+iμ)} e^{inβ} dβ on the circle, and the
//! zonal kernels κ̃_l(w, μ) = ½∫ q(c)^{−(1+iμ)} P_l(c) dc on the sphere for
//! the Hermitian point diag(e^w, e^{−w}), where q = cosh w − sinh w·c.
//! Panels are graded around the real parts of the complex zeros of q.

use std::f64::consts::PI;

use crate::models::{BoundaryPoint, CrownPoint, Model};
use crate::quadrature::{composite_gauss_legendre, legendre_polys};
use crate::C64;

/// Breakpoints graded geometrically around `center` with first offset
/// `scale`, clipped to [lo, hi].
fn graded_around(center: f64, scale: f64, lo: f64, hi: f64, out: &mut Vec<f64>) {
    if !(lo..=hi).contains(&center) {
        return;
    }
    out.push(center);
    let mut h = scale.max(1e-15);
    while h < hi - lo {
        for p in [center - h, center + h] {
            if p > lo && p < hi {
                out.push(p);
            }
        }
        h *= 2.0;
    }
}

fn finish_edges(mut pts: Vec<f64>, lo: f64, hi: f64) -> Vec<f64> {
    pts.push(lo);
    pts.push(hi);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut edges: Vec<f64> = Vec::with_capacity(pts.len());
    for p in pts {
        if edges.last().is_none_or(|l| p - l > 1e-13 * (hi - lo)) {
            edges.push(p);
        }
    }
    if let Some(l) = edges.last_mut() {
        *l = hi;
    }
    edges
}

fn evaluate(
    weights: &[f64],
    logq: &[C64],
    basis: &[Vec<C64>],
    rho1: f64,
    mus: &[f64],
) -> Vec<Vec<C64>> {
    let mut out = vec![vec![C64::new(0.0, 0.0); mus.len()]; basis.len()];
    let base: Vec<C64> = logq.iter().zip(weights).map(|(l, w)| (-rho1 * l).exp() * *w).collect();
    let mut v = vec![C64::new(0.0, 0.0); base.len()];
    for (k, mu) in mus.iter().enumerate() {
        for p in 0..base.len() {
            v[p] = base[p] * (C64::new(0.0, -mu) * logq[p]).exp();
        }
        for (row, slot) in basis.iter().zip(out.iter_mut()) {
            slot[k] = row.iter().zip(&v).map(|(b, x)| b * x).sum();
        }
    }
    out
}

/// κ̃_n(z, μ_k) for n = −nmax..=nmax, laid out as [n + nmax][k]. The point
/// must satisfy Re q(β, z) > 0 on the circle (true on the crown).
pub fn circle_crown_kernels(z: &CrownPoint, mus: &[f64], nmax: usize) -> Vec<Vec<C64>> {
    assert_eq!(z.model, Model::H2);
    let q = z.gram();
    // q(β) = A + B cos β + C sin β
    let a = 0.5 * (q[(0, 0)] + q[(1, 1)]);
    let b = 0.5 * (q[(1, 1)] - q[(0, 0)]);
    let c = -0.5 * (q[(0, 1)] + q[(1, 0)]);
    let r = (b * b + c * c).sqrt();
    let mut pts = Vec::new();
    let (lo, hi) = (-PI, PI);
    if r.norm() > 1e-14 * a.norm() {
        let beta0 = -C64::i() * ((b + C64::i() * c) / r).ln();
        let ac = (-a / r).acos();
        for root in [beta0 + ac, beta0 - ac] {
            let center = (root.re + PI).rem_euclid(2.0 * PI) - PI;
            let delta = root.im.abs();
            if delta < 1.0 {
                for shift in [-2.0 * PI, 0.0, 2.0 * PI] {
                    graded_around(center + shift, 0.5 * delta, lo, hi, &mut pts);
                }
            }
        }
    }
    let edges = finish_edges(pts, lo, hi);
    let mu_max = mus.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let extra = 16 + (0.5 * mu_max).ceil() as usize;
    let (nodes, weights) = composite_gauss_legendre(&edges, |w| extra + (0.75 * nmax as f64 * w + 2.0 * w).ceil() as usize);
    let weights: Vec<f64> = weights.iter().map(|w| w / (2.0 * PI)).collect();
    let logq: Vec<C64> = nodes.iter().map(|be| crate::models::horocycle_q(z, &BoundaryPoint::Circle(*be)).ln()).collect();
    let basis: Vec<Vec<C64>> = (-(nmax as i64)..=nmax as i64)
        .map(|n| nodes.iter().map(|be| C64::from_polar(1.0, n as f64 * be)).collect())
        .collect();
    evaluate(&weights, &logq, &basis, Model::H2.rho1(), mus)
}

/// κ̃_l(w, μ_k) for l = 0..=lmax at the Hermitian point diag(e^w, e^{−w}),
/// laid out as [l][k].
pub fn sphere_crown_kernels(w: C64, mus: &[f64], lmax: usize) -> Vec<Vec<C64>> {
    // u = (1 − c)/2, q = e^{−w} + 2u·sinh w, ½dc = du
    let e = (-w).exp();
    let sh = w.sinh();
    let mut pts = Vec::new();
    if sh.norm() > 1e-14 {
        let root = -e / (2.0 * sh);
        let center = root.re.clamp(0.0, 1.0);
        let dist = (root - center).norm();
        if dist < 0.5 {
            graded_around(center, 0.5 * dist, 0.0, 1.0, &mut pts);
        }
    }
    let edges = finish_edges(pts, 0.0, 1.0);
    let mu_max = mus.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let per = 16 + lmax + (0.5 * mu_max).ceil() as usize;
    let (nodes, weights) = composite_gauss_legendre(&edges, |_| per);
    let logq: Vec<C64> = nodes.iter().map(|u| (e + 2.0 * u * sh).ln()).collect();
    let polys: Vec<Vec<f64>> = nodes.iter().map(|u| legendre_polys(lmax, 1.0 - 2.0 * u)).collect();
    let basis: Vec<Vec<C64>> = (0..=lmax).map(|l| polys.iter().map(|p| C64::new(p[l], 0.0)).collect()).collect();
    evaluate(&weights, &logq, &basis, Model::H3.rho1(), mus)
}
