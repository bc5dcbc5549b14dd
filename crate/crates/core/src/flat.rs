//! Heat kernel transform on the real line: the Segal–Bargmann picture on
//! ℂ, its reproducing kernel, and the strip obstruction.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::C64;

/// Samples of a real function on the uniform grid x_j = −L + j·h.
#[derive(Debug, Clone, PartialEq)]
pub struct LineFunction {
    pub l: f64,
    pub h: f64,
    pub samples: Vec<f64>,
}

impl LineFunction {
    /// Samples `f` with `intervals` steps across [−L, L].
    pub fn sample(l: f64, intervals: usize, f: impl Fn(f64) -> f64) -> Self {
        let h = 2.0 * l / intervals as f64;
        let samples = (0..=intervals).map(|j| f(-l + j as f64 * h)).collect();
        Self { l, h, samples }
    }

    /// Default grid for time `t`: L = 100√t with 4096 intervals.
    pub fn sample_default(t: f64, f: impl Fn(f64) -> f64) -> Self {
        Self::sample(100.0 * t.sqrt(), 4096, f)
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.l + j as f64 * self.h
    }

    /// Trapezoid value of ∫ |f|².
    pub fn norm_sq(&self) -> f64 {
        let n = self.samples.len();
        let inner: f64 = self.samples.iter().map(|v| v * v).sum();
        let ends = 0.5 * (self.samples[0].powi(2) + self.samples[n - 1].powi(2));
        (inner - ends) * self.h
    }

    /// Fraction of ∫|f|² carried by points within `band` of either end.
    pub fn edge_fraction(&self, band: f64) -> f64 {
        let total = self.norm_sq();
        if total == 0.0 {
            return 0.0;
        }
        let edge: f64 = self
            .samples
            .iter()
            .enumerate()
            .filter(|(j, _)| {
                let x = self.x(*j);
                x < -self.l + band || x > self.l - band
            })
            .map(|(_, v)| v * v)
            .sum();
        edge * self.h / total
    }

    /// Shifted copy x ↦ f(x + a), exact when a is a multiple of h.
    pub fn shifted_by_steps(&self, steps: i64) -> Self {
        let n = self.samples.len() as i64;
        let samples = (0..n)
            .map(|j| {
                let k = j + steps;
                if (0..n).contains(&k) {
                    self.samples[k as usize]
                } else {
                    0.0
                }
            })
            .collect();
        Self { l: self.l, h: self.h, samples }
    }
}

/// Rectangular sample grid in ℂ.
#[derive(Debug, Clone, PartialEq)]
pub struct StripGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl StripGrid {
    /// Uniform grid on [−x_max, x_max] × [−y_max, y_max] with the given
    /// point counts.
    pub fn uniform(x_max: f64, nx: usize, y_max: f64, ny: usize) -> Self {
        Self {
            xs: crate::quadrature::linspace(nx, -x_max, x_max),
            ys: crate::quadrature::linspace(ny, -y_max, y_max),
        }
    }
}

/// Complex samples on a [`StripGrid`], stored row by row in y.
#[derive(Debug, Clone, PartialEq)]
pub struct StripFunction {
    pub grid: StripGrid,
    pub values: Vec<C64>,
}

impl StripFunction {
    pub fn at(&self, ix: usize, iy: usize) -> C64 {
        self.values[iy * self.grid.xs.len() + ix]
    }
}

/// k_t(x) = (4πt)^{−1/2} e^{−x²/4t}.
pub fn flat_heat_kernel(t: f64, x: f64) -> f64 {
    (-x * x / (4.0 * t)).exp() / (4.0 * PI * t).sqrt()
}

/// Entire extension k_t(z) = (4πt)^{−1/2} e^{−z²/4t}.
pub fn flat_heat_kernel_c(t: f64, z: C64) -> C64 {
    (-z * z / (4.0 * t)).exp() / (4.0 * PI * t).sqrt()
}

/// Reproducing kernel K(z, w) = k_{2t}(z − w̄) of the image of H_t.
pub fn flat_repro_kernel(t: f64, z: C64, w: C64) -> C64 {
    flat_heat_kernel_c(2.0 * t, z - w.conj())
}

/// Bargmann weight w_t(y) = (2πt)^{−1/2} e^{−y²/2t}.
pub fn flat_weight(t: f64, y: f64) -> f64 {
    (-y * y / (2.0 * t)).exp() / (2.0 * PI * t).sqrt()
}

fn check_edge_mass(f: &LineFunction, t: f64) -> Result<()> {
    let frac = f.edge_fraction(5.0 * t.sqrt());
    if frac > 1e-12 {
        return Err(Error::EdgeMass(frac));
    }
    Ok(())
}

/// H_t f(z) = ∫ f(u) k_t(z − u) du by the trapezoid rule, restricted to
/// samples where the kernel factor e^{−(x−u)²/4t} is above 1e−17.
pub fn flat_transform_at(f: &LineFunction, t: f64, z: C64) -> C64 {
    let window = 12.6 * t.sqrt();
    let lo = ((z.re - window + f.l) / f.h).floor().max(0.0) as usize;
    let hi = (((z.re + window + f.l) / f.h).ceil() as usize).min(f.samples.len() - 1);
    let n = f.samples.len();
    let mut sum = C64::new(0.0, 0.0);
    for j in lo..=hi {
        let v = f.samples[j];
        if v == 0.0 {
            continue;
        }
        let wt = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
        sum += flat_heat_kernel_c(t, z - f.x(j)) * (v * wt);
    }
    sum * f.h
}

/// H_t f on a strip grid. Along each column the factor e^{−iy(x−u)/2t}
/// is advanced by a fixed phase step, so uniform y-grids cost one complex
/// multiplication per kernel term.
pub fn flat_transform(f: &LineFunction, t: f64, grid: &StripGrid) -> Result<StripFunction> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t = {t} must be positive")));
    }
    check_edge_mass(f, t)?;
    let (nx, ny) = (grid.xs.len(), grid.ys.len());
    let mut values = vec![C64::new(0.0, 0.0); nx * ny];
    let uniform_y = ny > 2 && {
        let h = spacing(&grid.ys);
        grid.ys.windows(2).all(|p| ((p[1] - p[0]) - h).abs() <= 1e-12 * h.abs().max(1.0))
    };
    if !uniform_y {
        for (iy, &y) in grid.ys.iter().enumerate() {
            for (ix, &x) in grid.xs.iter().enumerate() {
                values[iy * nx + ix] = flat_transform_at(f, t, C64::new(x, y));
            }
        }
        return Ok(StripFunction { grid: grid.clone(), values });
    }
    let hy = spacing(&grid.ys);
    let y0 = grid.ys[0];
    let norm = 1.0 / (4.0 * PI * t).sqrt();
    let window = 12.6 * t.sqrt();
    let n = f.samples.len();
    let mut terms: Vec<(C64, C64)> = Vec::new();
    for (ix, &x) in grid.xs.iter().enumerate() {
        let lo = ((x - window + f.l) / f.h).floor().max(0.0) as usize;
        let hi = (((x + window + f.l) / f.h).ceil() as usize).min(n - 1);
        terms.clear();
        for j in lo..=hi {
            let v = f.samples[j];
            if v == 0.0 {
                continue;
            }
            let wt = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
            let d = x - f.x(j);
            let amp = v * wt * (-d * d / (4.0 * t)).exp();
            let start = C64::from_polar(amp, -y0 * d / (2.0 * t));
            let step = C64::from_polar(1.0, -hy * d / (2.0 * t));
            terms.push((start, step));
        }
        for (iy, &y) in grid.ys.iter().enumerate() {
            let mut sum = C64::new(0.0, 0.0);
            for (cur, step) in terms.iter_mut() {
                sum += *cur;
                *cur *= *step;
            }
            values[iy * nx + ix] = sum * (norm * f.h * (y * y / (4.0 * t)).exp());
        }
    }
    Ok(StripFunction { grid: grid.clone(), values })
}

fn trapezoid_1d(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    let inner: f64 = values.iter().sum();
    (inner - 0.5 * (values[0] + values[n - 1])) * h
}

fn spacing(v: &[f64]) -> f64 {
    (v[v.len() - 1] - v[0]) / (v.len() - 1) as f64
}

/// ∫_ℂ |F(x+iy)|² w_t(y) dx dy by the two-dimensional trapezoid rule.
/// Fails when the mass on the boundary rows or columns shows that the grid
/// truncates more than 1e−12 of the integral.
pub fn flat_bargmann_norm(big_f: &StripFunction, t: f64) -> Result<f64> {
    let (nx, ny) = (big_f.grid.xs.len(), big_f.grid.ys.len());
    let (hx, hy) = (spacing(&big_f.grid.xs), spacing(&big_f.grid.ys));
    let mut rows = Vec::with_capacity(ny);
    let mut first_col = Vec::with_capacity(ny);
    let mut last_col = Vec::with_capacity(ny);
    for (iy, &y) in big_f.grid.ys.iter().enumerate() {
        let w = flat_weight(t, y);
        let row: Vec<f64> = (0..nx).map(|ix| big_f.at(ix, iy).norm_sqr() * w).collect();
        first_col.push(row[0]);
        last_col.push(row[nx - 1]);
        rows.push(trapezoid_1d(&row, hx));
    }
    let total = trapezoid_1d(&rows, hy);
    if total == 0.0 {
        return Ok(0.0);
    }
    let edge_y = (rows[0] + rows[ny - 1]) * hy;
    let edge_x = (trapezoid_1d(&first_col, hy) + trapezoid_1d(&last_col, hy)) * hx;
    let frac = (edge_x + edge_y) / total;
    if frac > 1e-12 {
        return Err(Error::QuadratureWindow(frac));
    }
    Ok(total)
}

/// Solver used for the strip weight fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitMethod {
    /// Truncated-SVD least squares with signed weights.
    Signed,
    /// Projected gradient with w ≥ 0 and a fixed iteration cap.
    NonNegative,
}

/// Parameters of the strip obstruction experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct StripFitParams {
    pub t: f64,
    pub gamma: f64,
    pub y_fit: f64,
    pub y_probe: f64,
    pub candidate_dim: usize,
    pub fit_points: usize,
    pub probe_points: usize,
    pub method: FitMethod,
}

impl StripFitParams {
    pub fn new(t: f64, gamma: f64) -> Self {
        Self {
            t,
            gamma,
            y_fit: 2.0,
            y_probe: 6.0,
            candidate_dim: 64,
            fit_points: 400,
            probe_points: 400,
            method: FitMethod::Signed,
        }
    }

    /// Grid refinement by an integer factor in every discretization.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            candidate_dim: self.candidate_dim * factor,
            fit_points: self.fit_points * factor,
            probe_points: self.probe_points * factor,
            ..self.clone()
        }
    }
}

/// One row of the certificate profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateRow {
    pub y: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub mismatch: f64,
}

/// Result of [`strip_weight_fit`].
#[derive(Debug, Clone, PartialEq)]
pub struct StripFit {
    pub params: StripFitParams,
    pub vgrid: Vec<f64>,
    pub weight: Vec<f64>,
    /// ‖rhs − lhs‖ / ‖lhs‖ on the fit band [0, Y₁].
    pub fit_residual: f64,
    /// ‖rhs − lhs‖ / ‖lhs‖ on the probe band (Y₁, Y₂].
    pub probe_residual: f64,
    /// Largest over smallest retained singular value.
    pub condition: f64,
    /// Fit band followed by probe band.
    pub profile: Vec<CertificateRow>,
}

impl StripFit {
    /// Rows of the probe band.
    pub fn certificate(&self) -> impl Iterator<Item = &CertificateRow> {
        self.profile.iter().filter(move |r| r.y > self.params.y_fit)
    }
}

/// Midpoint v-grid on (−γ, γ) and its cell width.
pub fn strip_vgrid(gamma: f64, dim: usize) -> (Vec<f64>, f64) {
    let dv = 2.0 * gamma / dim as f64;
    ((0..dim).map(|j| -gamma + (j as f64 + 0.5) * dv).collect(), dv)
}

/// Right-hand side ∫ e^{iyv} e^{v²/4t} w(v) dv of the strip identity for
/// an even target (the sine part integrates against the real weight to
/// an odd function and is dropped).
pub fn strip_rhs(t: f64, vgrid: &[f64], dv: f64, weight: &[f64], y: f64) -> f64 {
    vgrid
        .iter()
        .zip(weight)
        .map(|(&v, &w)| (y * v).cos() * (v * v / (4.0 * t)).exp() * w * dv)
        .sum()
}

fn band(a: f64, b: f64, n: usize, include_start: bool) -> Vec<f64> {
    if include_start {
        crate::quadrature::linspace(n, a, b)
    } else {
        let h = (b - a) / n as f64;
        (1..=n).map(|j| a + j as f64 * h).collect()
    }
}

fn rel_l2(lhs: &[f64], rhs: &[f64]) -> f64 {
    let num: f64 = lhs.iter().zip(rhs).map(|(a, b)| (a - b).powi(2)).sum();
    let den: f64 = lhs.iter().map(|a| a * a).sum();
    (num / den).sqrt()
}

fn projected_gradient(a: &DMatrix<f64>, b: &DVector<f64>, iterations: usize) -> DVector<f64> {
    let smax = a.clone().singular_values().max();
    let step = 1.0 / (smax * smax);
    let at = a.transpose();
    let mut w = DVector::zeros(a.ncols());
    for _ in 0..iterations {
        let grad = &at * (a * &w - b);
        w -= grad * step;
        w.apply(|x| *x = x.max(0.0));
    }
    w
}

/// Least-squares fit of e^{−ty²} ≈ ∫ e^{iyv} e^{v²/4t} w(v) dv on [0, Y₁]
/// over weights supported in (−γ, γ), with the constant of the identity
/// absorbed into w, and the mismatch profile on (Y₁, Y₂].
///
/// The certificate mismatch at a probe point y is the accumulated L² misfit
/// on (Y₁, y] divided by the target e^{−ty²}.
pub fn strip_weight_fit(params: &StripFitParams) -> Result<StripFit> {
    let StripFitParams { t, gamma, y_fit, y_probe, candidate_dim, .. } = *params;
    if !(t > 0.0 && gamma > 0.0 && y_probe > y_fit && y_fit > 0.0) {
        return Err(Error::Domain("strip fit needs t, γ > 0 and 0 < Y₁ < Y₂".into()));
    }
    let (vgrid, dv) = strip_vgrid(gamma, candidate_dim);
    let ys_fit = band(0.0, y_fit, params.fit_points, true);
    let target = |y: f64| (-t * y * y).exp();
    let a = DMatrix::from_fn(ys_fit.len(), candidate_dim, |i, j| {
        let v = vgrid[j];
        (ys_fit[i] * v).cos() * (v * v / (4.0 * t)).exp() * dv
    });
    let b = DVector::from_iterator(ys_fit.len(), ys_fit.iter().map(|&y| target(y)));

    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let cutoff = 1e-15 * smax;
    let smin_kept = svd
        .singular_values
        .iter()
        .copied()
        .filter(|&s| s > cutoff)
        .fold(f64::INFINITY, f64::min);
    if !smin_kept.is_finite() {
        return Err(Error::IllConditioned(f64::INFINITY));
    }
    let condition = smax / smin_kept;
    let w = match params.method {
        FitMethod::Signed => svd
            .solve(&b, cutoff)
            .map_err(|_| Error::IllConditioned(condition))?,
        FitMethod::NonNegative => projected_gradient(&a, &b, 10_000),
    };
    let weight: Vec<f64> = w.iter().copied().collect();

    let lhs_fit: Vec<f64> = ys_fit.iter().map(|&y| target(y)).collect();
    let rhs_fit: Vec<f64> = ys_fit.iter().map(|&y| strip_rhs(t, &vgrid, dv, &weight, y)).collect();
    let ys_probe = band(y_fit, y_probe, params.probe_points, false);
    let lhs_probe: Vec<f64> = ys_probe.iter().map(|&y| target(y)).collect();
    let rhs_probe: Vec<f64> =
        ys_probe.iter().map(|&y| strip_rhs(t, &vgrid, dv, &weight, y)).collect();

    let mut profile = Vec::with_capacity(ys_fit.len() + ys_probe.len());
    for i in 0..ys_fit.len() {
        let (l, r) = (lhs_fit[i], rhs_fit[i]);
        profile.push(CertificateRow { y: ys_fit[i], lhs: l, rhs: r, mismatch: (r - l).abs() / l });
    }
    let hp = (y_probe - y_fit) / params.probe_points as f64;
    let mut accumulated = 0.0;
    for i in 0..ys_probe.len() {
        let (l, r) = (lhs_probe[i], rhs_probe[i]);
        accumulated += (r - l).powi(2) * hp;
        profile.push(CertificateRow { y: ys_probe[i], lhs: l, rhs: r, mismatch: accumulated.sqrt() / l });
    }

    Ok(StripFit {
        params: params.clone(),
        vgrid,
        weight,
        fit_residual: rel_l2(&lhs_fit, &rhs_fit),
        probe_residual: rel_l2(&lhs_probe, &rhs_probe),
        condition,
        profile,
    })
}

/// ‖rhs − lhs‖/‖lhs‖ of a given weight on a y-grid.
pub fn strip_residual(t: f64, vgrid: &[f64], dv: f64, weight: &[f64], ys: &[f64]) -> f64 {
    let lhs: Vec<f64> = ys.iter().map(|&y| (-t * y * y).exp()).collect();
    let rhs: Vec<f64> = ys.iter().map(|&y| strip_rhs(t, vgrid, dv, weight, y)).collect();
    rel_l2(&lhs, &rhs)
}
