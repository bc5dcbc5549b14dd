//! Angular grids on the circle and the sphere with their harmonic
//! analysis. Harmonics are orthonormal for the normalized measure, so the
//! mode coefficients of a band-limited function are exact.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::quadrature::gauss_legendre;
use crate::C64;

/// Angular grid: the circle (uniform angles) or the sphere (Gauss nodes in
/// cos θ times uniform φ).
#[derive(Clone)]
pub struct Angular {
    kind: Kind,
    /// Unit vectors of the grid points; (cos α, sin α, 0) on the circle.
    pub points: Vec<[f64; 3]>,
    /// Quadrature weights summing to 1.
    pub weights: Vec<f64>,
    n_phi: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

#[derive(Clone)]
enum Kind {
    /// Modes n = −M..=M stored at n + M.
    Circle { max_mode: usize },
    /// Modes (l, m), |m| ≤ l ≤ L, stored at l² + l + m. `plm` holds the
    /// normalized associated Legendre values per θ row, index l(l+1)/2 + m.
    Sphere { lmax: usize, cos_theta: Vec<f64>, theta_weights: Vec<f64>, plm: Vec<Vec<f64>> },
}

impl std::fmt::Debug for Angular {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Angular").field("points", &self.points.len()).finish()
    }
}

/// Normalized associated Legendre values P̃_l^m(c), 0 ≤ m ≤ l ≤ lmax, with
/// (1/2)∫ P̃_l^m(c)² dc · (1/2π)∫dφ = 1 for the harmonics P̃ e^{imφ}.
pub fn normalized_legendre(lmax: usize, c: f64) -> Vec<f64> {
    let s = (1.0 - c * c).max(0.0).sqrt();
    let idx = |l: usize, m: usize| l * (l + 1) / 2 + m;
    let mut p = vec![0.0; (lmax + 1) * (lmax + 2) / 2];
    // orthonormal on dω, then rescaled by √(4π)
    let mut pmm = 1.0 / (4.0 * PI).sqrt();
    for m in 0..=lmax {
        if m > 0 {
            pmm *= ((2 * m + 1) as f64 / (2 * m) as f64).sqrt() * s;
        }
        p[idx(m, m)] = pmm;
        if m < lmax {
            p[idx(m + 1, m)] = ((2 * m + 3) as f64).sqrt() * c * pmm;
        }
        for l in (m + 2)..=lmax {
            let (lf, mf) = (l as f64, m as f64);
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let lp = lf - 1.0;
            let a_prev = ((4.0 * lp * lp - 1.0) / (lp * lp - mf * mf)).sqrt();
            p[idx(l, m)] = a * (c * p[idx(l - 1, m)] - p[idx(l - 2, m)] / a_prev);
        }
    }
    let scale = (4.0 * PI).sqrt();
    p.iter_mut().for_each(|v| *v *= scale);
    p
}

/// Storage index of the (l, m) harmonic.
pub fn sphere_index(l: usize, m: i64) -> usize {
    ((l * l + l) as i64 + m) as usize
}

impl Angular {
    /// `n` uniform angles α_j = 2πj/n; modes |n| ≤ n/2 − 1.
    pub fn circle(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let points = (0..n)
            .map(|j| {
                let a = 2.0 * PI * j as f64 / n as f64;
                [a.cos(), a.sin(), 0.0]
            })
            .collect();
        Self {
            kind: Kind::Circle { max_mode: n / 2 - 1 },
            points,
            weights: vec![1.0 / n as f64; n],
            n_phi: n,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    /// `n_theta` Gauss nodes in cos θ times `n_phi` uniform φ; degrees
    /// l ≤ min(n_theta − 1, n_phi/2 − 1).
    pub fn sphere(n_theta: usize, n_phi: usize) -> Self {
        let lmax = (n_theta - 1).min(n_phi / 2 - 1);
        let (cos_theta, w) = gauss_legendre(n_theta, -1.0, 1.0);
        let mut points = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        for (c, wc) in cos_theta.iter().zip(&w) {
            let s = (1.0 - c * c).max(0.0).sqrt();
            for k in 0..n_phi {
                let phi = 2.0 * PI * k as f64 / n_phi as f64;
                points.push([s * phi.cos(), s * phi.sin(), *c]);
                weights.push(0.5 * wc / n_phi as f64);
            }
        }
        let plm = cos_theta.iter().map(|c| normalized_legendre(lmax, *c)).collect();
        let mut planner = FftPlanner::new();
        Self {
            kind: Kind::Sphere { lmax, cos_theta, theta_weights: w, plm },
            points,
            weights,
            n_phi,
            fwd: planner.plan_fft_forward(n_phi),
            inv: planner.plan_fft_inverse(n_phi),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn n_modes(&self) -> usize {
        match &self.kind {
            Kind::Circle { max_mode } => 2 * max_mode + 1,
            Kind::Sphere { lmax, .. } => (lmax + 1) * (lmax + 1),
        }
    }

    /// Largest degree |n| (circle) or l (sphere).
    pub fn max_degree(&self) -> usize {
        match &self.kind {
            Kind::Circle { max_mode } => *max_mode,
            Kind::Sphere { lmax, .. } => *lmax,
        }
    }

    /// Degree of the mode stored at `idx`.
    pub fn degree(&self, idx: usize) -> usize {
        match &self.kind {
            Kind::Circle { max_mode } => (idx as i64 - *max_mode as i64).unsigned_abs() as usize,
            Kind::Sphere { .. } => (idx as f64).sqrt().floor() as usize,
        }
    }

    /// Signed order of the mode stored at `idx`: n on the circle, m on the
    /// sphere.
    pub fn order(&self, idx: usize) -> i64 {
        match &self.kind {
            Kind::Circle { max_mode } => idx as i64 - *max_mode as i64,
            Kind::Sphere { .. } => {
                let l = (idx as f64).sqrt().floor() as i64;
                idx as i64 - l * l - l
            }
        }
    }

    fn row_modes(&self, row: &[C64]) -> Vec<C64> {
        let mut buf = row.to_vec();
        self.fwd.process(&mut buf);
        let n = self.n_phi as f64;
        buf.iter_mut().for_each(|v| *v /= n);
        buf
    }

    fn fold(&self, m: i64) -> usize {
        m.rem_euclid(self.n_phi as i64) as usize
    }

    /// Mode coefficients ∫ f·conj(Y_mode) with the normalized measure.
    pub fn analyze(&self, values: &[C64]) -> Vec<C64> {
        assert_eq!(values.len(), self.len());
        match &self.kind {
            Kind::Circle { max_mode } => {
                let fft = self.row_modes(values);
                let m = *max_mode as i64;
                (-m..=m).map(|n| fft[self.fold(n)]).collect()
            }
            Kind::Sphere { lmax, theta_weights, plm, .. } => {
                let mut out = vec![C64::new(0.0, 0.0); self.n_modes()];
                for (i, row) in values.chunks(self.n_phi).enumerate() {
                    let g = self.row_modes(row);
                    let w = 0.5 * theta_weights[i];
                    for l in 0..=*lmax {
                        for m in -(l as i64)..=(l as i64) {
                            let p = plm[i][l * (l + 1) / 2 + m.unsigned_abs() as usize];
                            out[sphere_index(l, m)] += g[self.fold(m)] * (w * p);
                        }
                    }
                }
                out
            }
        }
    }

    /// Values on the grid of Σ c_mode·Y_mode.
    pub fn synthesize(&self, modes: &[C64]) -> Vec<C64> {
        assert_eq!(modes.len(), self.n_modes());
        let zero = C64::new(0.0, 0.0);
        match &self.kind {
            Kind::Circle { max_mode } => {
                let mut buf = vec![zero; self.n_phi];
                let m = *max_mode as i64;
                for (idx, n) in (-m..=m).enumerate() {
                    buf[self.fold(n)] = modes[idx];
                }
                self.inv.process(&mut buf);
                buf
            }
            Kind::Sphere { lmax, cos_theta, plm, .. } => {
                let mut out = Vec::with_capacity(self.len());
                for i in 0..cos_theta.len() {
                    let mut buf = vec![zero; self.n_phi];
                    for l in 0..=*lmax {
                        for m in -(l as i64)..=(l as i64) {
                            let p = plm[i][l * (l + 1) / 2 + m.unsigned_abs() as usize];
                            buf[self.fold(m)] += modes[sphere_index(l, m)] * p;
                        }
                    }
                    self.inv.process(&mut buf);
                    out.extend(buf);
                }
                out
            }
        }
    }

    /// Values Y_mode(dir) of all harmonics at an arbitrary unit vector.
    pub fn harmonics_at(&self, dir: [f64; 3]) -> Vec<C64> {
        let phi = dir[1].atan2(dir[0]);
        match &self.kind {
            Kind::Circle { max_mode } => {
                let m = *max_mode as i64;
                (-m..=m).map(|n| C64::from_polar(1.0, n as f64 * phi)).collect()
            }
            Kind::Sphere { lmax, .. } => {
                let p = normalized_legendre(*lmax, dir[2].clamp(-1.0, 1.0));
                let mut out = vec![C64::new(0.0, 0.0); self.n_modes()];
                for l in 0..=*lmax {
                    for m in -(l as i64)..=(l as i64) {
                        let v = p[l * (l + 1) / 2 + m.unsigned_abs() as usize];
                        out[sphere_index(l, m)] = C64::from_polar(v, m as f64 * phi);
                    }
                }
                out
            }
        }
    }
}
