//! Heat kernel k_t and its holomorphic extension, the heat kernel transform
//! H_t f = f ∗ k_t continued to the crown, G-orbital integrals, the shift
//! operator D, the Abel transform, the weight w_t and the norm identity
//! ‖f‖² = ∫ (D𝒪_{|H_t f|²})(iY)·w_t(Y) dY.
//!
//! Crown coordinates: exp(iy)·x_o with |y| < π/4 is a crown point, and the
//! orbital integral 𝒪(iY) integrates over the orbit of exp(iY/2)·x_o. The
//! functions ψ_λ and w_t use the metric coordinate, in which exp(iy) sits
//! at 2y.

pub mod crown_kernels;

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::{FourierPlan, FourierTable, GridSpec, XFunction};
use crate::models::{haar_kak_density, CrownPoint, GroupElement, Model};
use crate::quadrature::{composite_gauss_legendre, gauss_legendre, linspace, trapezoid_weights};
use crate::spherical::{phi_invariant, phi_real, psi, Plancherel};
use crate::C64;

use crown_kernels::{circle_crown_kernels, sphere_crown_kernels};

/// w_t(Y) = ½·e^{2t|ρ|²}(2πt)^{−1/2}e^{−Y²/2t}.
pub fn weight_w(model: Model, t: f64, y: f64) -> f64 {
    log_weight_w(model, t, y).exp()
}

fn log_weight_w(model: Model, t: f64, y: f64) -> f64 {
    (0.5f64).ln() + 2.0 * t * model.rho2() - 0.5 * (2.0 * PI * t).ln() - y * y / (2.0 * t)
}

/// ln ψ_μ(iY) = ln(2 cosh μY).
fn log_psi_imag(mu: f64, y: f64) -> f64 {
    let a = (mu * y).abs();
    a + (-2.0 * a).exp().ln_1p()
}

/// Spectral quadrature of ∫ e^{−t(μ²+|ρ|²)}φ_μ dPl for a point whose
/// spherical function grows like e^{μ·growth}.
fn heat_spectral(
    pl: &Plancherel,
    t: f64,
    growth: f64,
    oscillation: f64,
    phi: impl Fn(f64) -> Result<C64>,
) -> Result<C64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("t = {t} must be positive")));
    }
    let rho2 = pl.model.rho2();
    let top = growth / t + (40.0 / t).sqrt();
    let width = 0.5f64.min(1.0 / (1.0 + oscillation));
    let panels = (top / width).ceil() as usize;
    let edges = linspace(panels + 1, 0.0, top);
    let (nodes, weights) = composite_gauss_legendre(&edges, |_| 16);
    let mut sum = C64::new(0.0, 0.0);
    let mut peak = 0.0f64;
    let mut last = 0.0;
    for (mu, w) in nodes.iter().zip(&weights) {
        let term = phi(*mu)? * ((-t * (mu * mu + rho2)).exp() * pl.density(*mu));
        peak = peak.max(term.norm());
        last = term.norm();
        sum += term * *w;
    }
    if last > 1e-12 * peak {
        return Err(Error::Cutoff(format!("heat integrand tail {:.3e} of its peak at μ = {top}", last / peak)));
    }
    Ok(sum)
}

/// k_t(a_r·x_o) = ∫ e^{−t(μ²+|ρ|²)}φ_μ(a_r) dPl(μ).
pub fn heat_kernel(pl: &Plancherel, t: f64, r: f64) -> Result<f64> {
    let model = pl.model;
    Ok(heat_spectral(pl, t, 0.0, 2.0 * r, |mu| phi_real(model, mu, r).map(|v| C64::new(v, 0.0)))?.re)
}

/// Closed form of the H³ heat kernel, c_X√π/(4t^{3/2})·e^{−t}·(d/sinh d)·e^{−d²/4t}
/// with d = 2r, continued to complex distances.
pub fn heat_kernel_h3_closed(cx: f64, t: f64, d: C64) -> C64 {
    let ratio = if d.norm() < 1e-6 { C64::new(1.0, 0.0) - d * d / 6.0 } else { d / d.sinh() };
    ratio * (cx * PI.sqrt() / (4.0 * t.powf(1.5)) * (-t).exp()) * (-d * d / (4.0 * t)).exp()
}

/// k̃_t(z) = ∫ e^{−t(μ²+|ρ|²)}φ_μ(z) dPl(μ) at a crown point.
pub fn heat_kernel_crown(pl: &Plancherel, t: f64, z: &CrownPoint) -> Result<C64> {
    if let Some((_, y)) = z.coords {
        if !crate::models::in_omega(z.model, y) {
            return Err(Error::CrownBoundary(y.abs()));
        }
    }
    let w = z.half_trace();
    let s = w.acosh();
    let model = pl.model;
    heat_spectral(pl, t, s.im.abs(), s.re.abs(), |mu| phi_invariant(model, mu, w))
}

/// Spherical transform H̃(μ) = ∫_X H φ_μ of a radial profile H(d), d the
/// distance to x_o, by Gauss–Legendre quadrature over d ≤ `d_max`.
pub fn spherical_transform(model: Model, h: impl Fn(f64) -> f64, mu: f64, d_max: f64) -> Result<f64> {
    let (nodes, weights) = composite_gauss_legendre(&linspace(17, 0.0, 0.5 * d_max), |_| 48);
    let mut s = 0.0;
    for (r, w) in nodes.iter().zip(&weights) {
        s += w * haar_kak_density(model, *r) * h(2.0 * r) * phi_real(model, mu, *r)?;
    }
    Ok(s)
}

/// Abel transform (𝒜H)(a_s) = a_s^ρ∫_N H(a_s n·x_o) dn of a radial profile
/// H(d), with dn Lebesgue measure in horocyclic coordinates.
pub fn abel_transform(model: Model, h: impl Fn(f64) -> f64, s: f64) -> Result<f64> {
    let d0 = 2.0 * s.abs();
    // d = d0 + τ², τ ≤ τ_max
    let tau_max = 40f64.sqrt();
    let peak = (0..=64).map(|j| h(d0 + tau_max * tau_max * j as f64 / 64.0).abs()).fold(0.0, f64::max);
    let tail = h(d0 + tau_max * tau_max).abs();
    if tail > 1e-12 * peak.max(f64::MIN_POSITIVE) {
        return Err(Error::Cutoff(format!("profile has not decayed at d = {}", d0 + tau_max * tau_max)));
    }
    let (nodes, weights) = composite_gauss_legendre(&linspace(33, 0.0, tau_max), |_| 24);
    let mut sum = 0.0;
    for (tau, w) in nodes.iter().zip(&weights) {
        let d = d0 + tau * tau;
        let jac = 2.0 * tau;
        let v = match model {
            Model::H2 => {
                // cosh d − cosh d0 = 2 sinh((d + d0)/2)·sinh(τ²/2); the factor τ cancels jac
                let x = 0.5 * tau * tau;
                let sinhc = if x < 1e-8 { 1.0 } else { x.sinh() / x };
                4.0 * h(d) * d.sinh() / (2.0 * (0.5 * (d + d0)).sinh() * sinhc).sqrt()
            }
            Model::H3 => 2.0 * PI * h(d) * d.sinh() * jac,
        };
        sum += w * v;
    }
    Ok(sum)
}

/// Normalization of dλ against dμ in the Abel relation
/// (𝒜H)(a_s) = ∫ H̃(μ)ψ_μ(2s) dλ, namely dλ = πc_X·dμ = dμ/2π.
pub fn abel_dlambda(cx: f64) -> f64 {
    PI * cx
}

/// g(μ_k) on the μ-grid together with the Plancherel weights.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDensity {
    pub model: Model,
    pub mus: Vec<f64>,
    /// Trapezoid weights in μ.
    pub weights: Vec<f64>,
    /// Trapezoid weights times c_X|c(μ)|⁻².
    pub measure: Vec<f64>,
    pub g: Vec<f64>,
}

/// D applied to a spectral density at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftValue {
    pub value: C64,
    /// The truncated integrand is still significant at the μ-cutoff.
    pub diverging: bool,
}

impl SpectralDensity {
    /// g(μ) = e^{−2t(μ²+|ρ|²)}∫_B |f̂(b, μ)|² db.
    pub fn from_table(plan: &FourierPlan, table: &FourierTable, t: f64) -> Self {
        let grid = plan.grid;
        let n = grid.n_mu;
        let ang = plan.angular();
        let rho2 = grid.model.rho2();
        let mus = plan.mu_nodes().to_vec();
        let g = (0..n)
            .map(|k| {
                let b: f64 = (0..ang.len()).map(|j| ang.weights[j] * table.values[j * n + k].norm_sqr()).sum();
                (-2.0 * t * (mus[k] * mus[k] + rho2)).exp() * b
            })
            .collect();
        Self { model: grid.model, weights: grid.mu_grid().1, measure: plan.mu_measure().to_vec(), mus, g }
    }

    /// Density given directly as a function of μ on the plan's grid.
    pub fn from_fn(plan: &FourierPlan, g: impl Fn(f64) -> f64) -> Self {
        let mus = plan.mu_nodes().to_vec();
        Self {
            model: plan.grid.model,
            g: mus.iter().map(|m| g(*m)).collect(),
            weights: plan.grid.mu_grid().1,
            measure: plan.mu_measure().to_vec(),
            mus,
        }
    }

    /// (Dh)(Z) = ∫ g(μ)ψ_μ(Z) dPl(μ), Z in the metric coordinate.
    pub fn shift_d(&self, z: C64) -> ShiftValue {
        let mut sum = C64::new(0.0, 0.0);
        let mut peak = 0.0f64;
        let mut last = 0.0;
        for k in 0..self.mus.len() {
            let term = psi(self.mus[k], z) * (self.g[k] * self.measure[k]);
            sum += term;
            let mag = term.norm();
            peak = peak.max(mag);
            last = mag;
        }
        ShiftValue { value: sum, diverging: last > 1e-8 * peak }
    }

    /// ∫ g(μ)ψ_μ(Z) dμ without the Plancherel density.
    pub fn resynthesis(&self, z: C64) -> C64 {
        (0..self.mus.len()).map(|k| psi(self.mus[k], z) * (self.g[k] * self.weights[k])).sum()
    }

    /// ∫_𝔞 [∫ g ψ_μ(i2Y) dPl] w_t(Y) dY restricted to μ ≤ `mu_cut`,
    /// evaluated in log space on a trapezoid Y-grid.
    pub fn weighted_integral(&self, t: f64, mu_cut: f64) -> f64 {
        let used: Vec<usize> = (0..self.mus.len()).filter(|&k| self.mus[k] <= mu_cut + 1e-12 && self.g[k] > 0.0).collect();
        let mu_top = used.iter().map(|&k| self.mus[k]).fold(0.0, f64::max);
        let y_max = 2.0 * mu_top * t + 14.0 * t.sqrt();
        let n = ((2.0 * y_max) / (t.sqrt() / 8.0)).ceil() as usize + 1;
        let ys = linspace(n, -y_max, y_max);
        let wy = trapezoid_weights(n, -y_max, y_max);
        let log_gm: Vec<f64> = used.iter().map(|&k| (self.g[k] * self.measure[k]).ln()).collect();
        let mut total = 0.0;
        for (y, wyv) in ys.iter().zip(&wy) {
            let lw = log_weight_w(self.model, t, *y);
            let inner: f64 = used
                .iter()
                .zip(&log_gm)
                .map(|(&k, lg)| (lg + log_psi_imag(self.mus[k], 2.0 * y) + lw).exp())
                .sum();
            total += wyv * inner;
        }
        total
    }
}

/// A holomorphic function on the crown given by the Fourier transform of
/// its restriction to X.
#[derive(Debug, Clone, PartialEq)]
pub struct CrownFunction {
    pub t: f64,
    /// Fourier transform of F|_X.
    pub spectrum: FourierTable,
    /// F on the X grid.
    pub x_slice: XFunction,
}

impl CrownFunction {
    /// The crown function whose restriction to X has Fourier table `spectrum`.
    pub fn from_spectrum(plan: &FourierPlan, spectrum: FourierTable, t: f64) -> Result<Self> {
        let x_slice = plan.invert_unchecked(&spectrum)?;
        Ok(Self { t, spectrum, x_slice })
    }

    fn mode_spectrum(&self, plan: &FourierPlan) -> Vec<Vec<C64>> {
        let mut modes = plan.table_modes(&self.spectrum);
        for (row, m) in modes.iter_mut().zip(plan.mu_measure()) {
            row.iter_mut().for_each(|v| *v *= *m);
        }
        modes
    }

    fn slice_modes(&self, plan: &FourierPlan, weighted: &[Vec<C64>], r: f64, y: f64) -> Vec<C64> {
        let ang = plan.angular();
        let deg_max = ang.max_degree();
        let mus = plan.mu_nodes();
        let kern: Vec<Vec<C64>> = match plan.grid.model {
            Model::H2 => {
                let z = CrownPoint::complexified(GroupElement::a(Model::H2, r), y);
                let k = circle_crown_kernels(&z, mus, deg_max);
                (0..=deg_max).map(|d| k[deg_max + d].clone()).collect()
            }
            Model::H3 => sphere_crown_kernels(C64::new(2.0 * r, 2.0 * y), mus, deg_max),
        };
        (0..ang.n_modes())
            .map(|mode| {
                let kd = &kern[ang.degree(mode)];
                weighted.iter().zip(kd).map(|(row, kv)| row[mode] * kv).sum()
            })
            .collect()
    }

    fn check_y(y: f64) -> Result<()> {
        if !crate::models::in_omega(Model::H2, y) {
            return Err(Error::CrownBoundary(y.abs()));
        }
        Ok(())
    }

    /// F(x·exp(iy)) for the X grid points x = k·a_r.
    pub fn slice(&self, plan: &FourierPlan, y: f64) -> Result<XFunction> {
        Self::check_y(y)?;
        let weighted = self.mode_spectrum(plan);
        let ang = plan.angular();
        let mut out = XFunction::zeros(plan.grid);
        let n = ang.len();
        for (i, r) in plan.r_nodes().iter().enumerate() {
            let m = self.slice_modes(plan, &weighted, *r, y);
            out.values[i * n..(i + 1) * n].copy_from_slice(&ang.synthesize(&m));
        }
        Ok(out)
    }

    /// F(k·a_r·exp(iy)) where k carries the base direction to `dir`.
    pub fn eval_polar(&self, plan: &FourierPlan, r: f64, dir: [f64; 3], y: f64) -> Result<C64> {
        Self::check_y(y)?;
        let weighted = self.mode_spectrum(plan);
        let m = self.slice_modes(plan, &weighted, r, y);
        Ok(plan.angular().harmonics_at(dir).iter().zip(&m).map(|(h, c)| h * c).sum())
    }

    /// F at an arbitrary crown point of H².
    pub fn eval_h2(&self, plan: &FourierPlan, z: &CrownPoint) -> Result<C64> {
        if z.model != Model::H2 || plan.grid.model != Model::H2 {
            return Err(Error::Domain("eval_h2 needs the H2 model".into()));
        }
        if let Some((_, y)) = z.coords {
            Self::check_y(y)?;
        }
        let weighted = self.mode_spectrum(plan);
        let deg_max = plan.angular().max_degree();
        let k = circle_crown_kernels(z, plan.mu_nodes(), deg_max);
        let mut s = C64::new(0.0, 0.0);
        for (mode, kn) in k.iter().enumerate() {
            s += weighted.iter().zip(kn).map(|(row, kv)| row[mode] * kv).sum::<C64>();
        }
        Ok(s)
    }
}

/// H_t f computed spectrally: F̂ = f̂·e^{−t(μ²+|ρ|²)}.
pub fn heat_transform_apply(plan: &FourierPlan, f: &XFunction, t: f64) -> Result<CrownFunction> {
    let fhat = plan.forward(f)?;
    heat_transform_table(plan, &fhat, t)
}

/// H_t applied to a function given by its Fourier table.
pub fn heat_transform_table(plan: &FourierPlan, fhat: &FourierTable, t: f64) -> Result<CrownFunction> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("t = {t} must be positive")));
    }
    let rho2 = plan.grid.model.rho2();
    let spectrum = fhat.multiply_mu(|mu| C64::new((-t * (mu * mu + rho2)).exp(), 0.0));
    CrownFunction::from_spectrum(plan, spectrum, t)
}

/// k_t tabulated on equispaced distances d ∈ [0, d_cut] with cubic
/// interpolation, and zero beyond d_cut = 2 + 12√t where it is below
/// e^{−36} of its peak.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatKernelTable {
    d_cut: f64,
    step: f64,
    values: Vec<f64>,
}

impl HeatKernelTable {
    pub fn new(pl: &Plancherel, t: f64, n: usize) -> Result<Self> {
        let d_cut = 2.0 + 12.0 * t.max(0.0).sqrt();
        let n = n.max(8);
        let values = linspace(n, 0.0, d_cut).iter().map(|d| heat_kernel(pl, t, 0.5 * d)).collect::<Result<_>>()?;
        Ok(Self { d_cut, step: d_cut / (n - 1) as f64, values })
    }

    /// k_t at distance d.
    pub fn at(&self, d: f64) -> f64 {
        if d >= self.d_cut {
            return 0.0;
        }
        let n = self.values.len();
        let x = d / self.step;
        let i = (x.floor() as usize).clamp(1, n - 3);
        let u = x - i as f64;
        let p = &self.values[i - 1..i + 3];
        let l0 = -u * (u - 1.0) * (u - 2.0) / 6.0;
        let l1 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
        let l2 = -(u + 1.0) * u * (u - 2.0) / 2.0;
        let l3 = (u + 1.0) * u * (u - 1.0) / 6.0;
        p[0] * l0 + p[1] * l1 + p[2] * l2 + p[3] * l3
    }
}

/// (k_t ∗ f)(x) by direct quadrature over the X grid.
pub fn direct_convolution(plan: &FourierPlan, f: &XFunction, t: f64, points: &[CrownPoint]) -> Result<Vec<C64>> {
    let grid = plan.grid;
    let table = HeatKernelTable::new(&plan.plancherel, t, 401)?;
    let kt = |d: f64| table.at(d);
    let (rs, wr) = grid.radial();
    let ang = plan.angular();
    let mut src = Vec::with_capacity(f.values.len());
    for (i, r) in rs.iter().enumerate() {
        for (j, dir) in ang.points.iter().enumerate() {
            let w = wr[i] * haar_kak_density(grid.model, *r) * ang.weights[j];
            src.push((grid.point(*r, *dir), w * f.values[i * ang.len() + j]));
        }
    }
    Ok(points
        .iter()
        .map(|x| {
            src.iter()
                .map(|(y, fw)| {
                    let d = distance(x, y);
                    *fw * kt(d)
                })
                .sum()
        })
        .collect())
}

/// Geodesic distance between two real points.
pub fn distance(x: &CrownPoint, y: &CrownPoint) -> f64 {
    let qx = x.gram();
    let qy = y.gram();
    // cosh d = ½tr(Q_x·Q_y^{−1}) for unimodular Gram matrices
    let inv = nalgebra::Matrix2::new(qy[(1, 1)], -qy[(0, 1)], -qy[(1, 0)], qy[(0, 0)]);
    let c = 0.5 * (qx * inv).trace().re;
    c.max(1.0).acosh()
}

/// Radial quadrature used by the direct orbital integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitGrid {
    pub r_max: f64,
    pub n_r: usize,
    /// Nodes for the second K-factor.
    pub n_k: usize,
}

impl OrbitGrid {
    pub fn default_for(model: Model) -> Self {
        match model {
            Model::H2 => Self { r_max: 3.5, n_r: 40, n_k: 32 },
            Model::H3 => Self { r_max: 3.5, n_r: 64, n_k: 48 },
        }
    }
}

/// Spectral entries below this fraction of the peak are dropped from the
/// direct orbital integrals.
const SIGNIFICANT: f64 = 1e-12;

fn significant_mu(weighted: &[Vec<C64>]) -> Vec<usize> {
    let mags: Vec<f64> = weighted.iter().map(|row| row.iter().map(|v| v.norm()).fold(0.0, f64::max)).collect();
    let peak = mags.iter().cloned().fold(0.0, f64::max);
    (0..mags.len()).filter(|&k| mags[k] > SIGNIFICANT * peak && peak > 0.0).collect()
}

/// 𝒪_{|F|²}(iY) = ∫_G |F(g·exp(iY/2))|² dg by KAK quadrature. On H² the
/// first K-integral is done exactly through mode orthogonality and the
/// remaining (r, k₂) integral numerically. On H³ F must be K-invariant; the
/// integrand then depends on k₂ only through one coordinate u ∈ [−1, 1].
pub fn orbital_integral_direct(plan: &FourierPlan, f: &CrownFunction, y_orbit: f64, og: OrbitGrid) -> Result<f64> {
    let y = 0.5 * y_orbit;
    CrownFunction::check_y(y)?;
    let model = plan.grid.model;
    let weighted = f.mode_spectrum(plan);
    let ks = significant_mu(&weighted);
    let mus: Vec<f64> = ks.iter().map(|&k| plan.mu_nodes()[k]).collect();
    let (rs, wr) = gauss_legendre(og.n_r, 0.0, og.r_max);
    let mut radial = vec![0.0; og.n_r];
    match model {
        Model::H2 => {
            let ang = plan.angular();
            let peak = weighted.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
            let modes: Vec<usize> = (0..ang.n_modes())
                .filter(|&mode| ks.iter().any(|&k| weighted[k][mode].norm() > SIGNIFICANT * peak))
                .collect();
            let nmax = modes.iter().map(|&md| ang.degree(md)).max().unwrap_or(0);
            for (i, r) in rs.iter().enumerate() {
                let mut acc = 0.0;
                for j in 0..og.n_k {
                    let th = PI * j as f64 / og.n_k as f64;
                    let g = GroupElement::a(Model::H2, *r).mul(&GroupElement::k(Model::H2, th));
                    let z = CrownPoint::complexified(g, y);
                    let kern = circle_crown_kernels(&z, &mus, nmax);
                    for &mode in &modes {
                        let n = ang.order(mode);
                        let kn = &kern[(n + nmax as i64) as usize];
                        let gn: C64 = ks.iter().zip(kn).map(|(&k, kv)| weighted[k][mode] * kv).sum();
                        acc += gn.norm_sqr();
                    }
                }
                radial[i] = acc / og.n_k as f64;
            }
        }
        Model::H3 => {
            let n = plan.grid.n_mu;
            let ang = plan.angular();
            for k in 0..n {
                let col: Vec<C64> = (0..ang.len()).map(|j| f.spectrum.values[j * n + k]).collect();
                let spread = col.iter().map(|v| (v - col[0]).norm()).fold(0.0, f64::max);
                let peak = f.spectrum.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
                if spread > 1e-9 * peak {
                    return Err(Error::Domain("H3 orbital integrals need a K-invariant function".into()));
                }
            }
            let radial_spec: Vec<C64> = ks.iter().map(|&k| f.spectrum.values[k] * plan.mu_measure()[k]).collect();
            let (us, wu) = gauss_legendre(og.n_k, -1.0, 1.0);
            let (c2, s2) = ((2.0 * y).cos(), (2.0 * y).sin());
            for (i, r) in rs.iter().enumerate() {
                let mut acc = 0.0;
                for (u, w) in us.iter().zip(&wu) {
                    let ht = C64::new(c2 * (2.0 * r).cosh(), s2 * (2.0 * r).sinh() * u);
                    let mut v = C64::new(0.0, 0.0);
                    for (mu, c) in mus.iter().zip(&radial_spec) {
                        v += c * phi_invariant(Model::H3, *mu, ht)?;
                    }
                    acc += 0.5 * w * v.norm_sqr();
                }
                radial[i] = acc;
            }
        }
    }
    let contrib: Vec<f64> = rs.iter().zip(&radial).map(|(r, v)| haar_kak_density(model, *r) * v).collect();
    let peak = contrib.iter().cloned().fold(0.0, f64::max);
    let edge = contrib.last().copied().unwrap_or(0.0);
    if edge > 1e-8 * peak {
        return Err(Error::Cutoff(format!("orbital integrand at r = {} is {:.3e} of its peak", og.r_max, edge / peak)));
    }
    Ok(contrib.iter().zip(&wr).map(|(c, w)| c * w).sum())
}

/// ∬ |f̂|²e^{−2t(μ²+|ρ|²)}φ_λ(exp Z) dμ(b, λ) for Z = X + iY in the
/// A-coordinate, where exp Z·x_o has half-trace cosh 2Z.
pub fn orbital_integral_spectral(plan: &FourierPlan, fhat: &FourierTable, t: f64, z: C64) -> Result<C64> {
    let dens = SpectralDensity::from_table(plan, fhat, t);
    let w = (2.0 * z).cosh();
    let mut s = C64::new(0.0, 0.0);
    for k in 0..dens.mus.len() {
        if dens.g[k] == 0.0 {
            continue;
        }
        s += phi_invariant(plan.grid.model, dens.mus[k], w)? * (dens.g[k] * dens.measure[k]);
    }
    Ok(s)
}

/// Both sides of the norm identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormIdentity {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_gap: f64,
}

fn rel_gap(a: f64, b: f64) -> f64 {
    if a == 0.0 && b == 0.0 {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// lhs = ‖f‖², rhs = ∫[∫ g ψ_μ(i2Y) dPl] w_t(Y) dY with g built from f̂.
pub fn norm_identity_check(plan: &FourierPlan, f: &XFunction, t: f64) -> Result<NormIdentity> {
    let fhat = plan.forward(f)?;
    let lhs = f.norm_sq();
    let rhs = SpectralDensity::from_table(plan, &fhat, t).weighted_integral(t, plan.grid.lambda);
    Ok(NormIdentity { lhs, rhs, rel_gap: rel_gap(lhs, rhs) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Member,
    NonMember,
    Inconclusive,
}

/// Outcome of the image test with its cutoff-doubling diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport {
    pub verdict: Verdict,
    /// ∫(D𝒪)(iY)w_t dY on the full grid.
    pub value: f64,
    /// Growth of the weighted integral from Λ/2 to Λ.
    pub growth: f64,
    /// Growth of the spectral orbital integral at each tested Y.
    pub orbit_growth: Vec<f64>,
}

fn growth(full: f64, half: f64) -> f64 {
    if full == 0.0 && half == 0.0 {
        1.0
    } else if half == 0.0 {
        f64::INFINITY
    } else {
        full / half
    }
}

/// Estimates whether F lies in the image of H_t. `ygrid` holds orbital
/// coordinates Y with |Y| < π/2 at which 𝒪_{|F|²}(iY) is tested.
pub fn image_membership(plan: &FourierPlan, f: &CrownFunction, t: f64, ygrid: &[f64]) -> Result<MembershipReport> {
    let dens = SpectralDensity::from_table(plan, &f.spectrum, 0.0);
    let lambda = plan.grid.lambda;
    let mut orbit_growth = Vec::with_capacity(ygrid.len());
    for &yy in ygrid {
        if yy.abs() >= 0.5 * PI {
            return Err(Error::CrownBoundary(0.5 * yy.abs()));
        }
        let w = C64::new((2.0 * yy).cos(), 0.0);
        let (mut full, mut half) = (0.0, 0.0);
        for k in 0..dens.mus.len() {
            if dens.g[k] == 0.0 {
                continue;
            }
            let v = phi_invariant(plan.grid.model, dens.mus[k], w)?.re * dens.g[k] * dens.measure[k];
            full += v;
            if dens.mus[k] <= 0.5 * lambda + 1e-12 {
                half += v;
            }
        }
        orbit_growth.push(growth(full, half));
    }
    let value = dens.weighted_integral(t, lambda);
    let half = dens.weighted_integral(t, 0.5 * lambda);
    let g = growth(value, half);
    let all = orbit_growth.iter().chain(std::iter::once(&g));
    let verdict = if all.clone().any(|v| *v > 10.0) {
        Verdict::NonMember
    } else if all.clone().all(|v| *v < 1.01) {
        Verdict::Member
    } else {
        Verdict::Inconclusive
    };
    Ok(MembershipReport { verdict, value, growth: g, orbit_growth })
}

/// Preimage of F under H_t with its verification residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Preimage {
    pub g: XFunction,
    /// Relative L² gap between H_t g and F on X.
    pub residual: f64,
    /// Largest factor e^{t(μ²+|ρ|²)} applied.
    pub amplification: f64,
}

/// Data below this multiple of the estimated quadrature noise are discarded.
pub const NOISE_MARGIN: f64 = 100.0;
/// Largest admissible amplification e^{t(μ²+|ρ|²)}.
pub const MAX_AMPLIFICATION: f64 = 1e12;

/// Fourier-transforms F|_X, multiplies by e^{t(μ²+|ρ|²)} where the data are
/// above the noise floor and inverts. The noise level is read off the top
/// tenth of the μ-band, where the spectrum of a heat-transform image has
/// decayed below rounding.
pub fn surjectivity_construct(plan: &FourierPlan, f: &CrownFunction, t: f64) -> Result<Preimage> {
    let fhat = plan.forward(&f.x_slice)?;
    let n = plan.grid.n_mu;
    let peak = fhat.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let noise = fhat
        .values
        .iter()
        .enumerate()
        .filter(|(i, _)| i % n >= n - n / 10)
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max);
    // a band that still carries signal near Λ is not noise
    let floor = (NOISE_MARGIN * noise).clamp(1e-16 * peak, 1e-8 * peak);
    let rho2 = plan.grid.model.rho2();
    let mut ghat = fhat.clone();
    let mut amplification = 1.0f64;
    for k in 0..n {
        let mu = plan.mu_nodes()[k];
        let amp = (t * (mu * mu + rho2)).exp();
        let col_peak = (0..plan.angular().len()).map(|j| fhat.values[j * n + k].norm()).fold(0.0, f64::max);
        for j in 0..plan.angular().len() {
            let v = &mut ghat.values[j * n + k];
            if col_peak <= floor {
                *v = C64::new(0.0, 0.0);
            } else {
                *v *= amp;
            }
        }
        if col_peak > floor {
            amplification = amplification.max(amp);
        }
    }
    if amplification > MAX_AMPLIFICATION {
        return Err(Error::AmplificationOverflow(amplification));
    }
    let g = plan.invert_unchecked(&ghat)?;
    let again = heat_transform_table(plan, &ghat, t)?;
    let residual = again.x_slice.rel_l2_err(&f.x_slice);
    Ok(Preimage { g, residual, amplification })
}

/// JSON record of one heat-transform check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatRecord {
    pub operation: String,
    pub model: String,
    pub t: f64,
    pub grids: GridSummary,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_gap: f64,
    pub verdict: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSummary {
    pub r_max: f64,
    pub n_r: usize,
    pub n_theta: usize,
    pub n_phi: usize,
    pub lambda: f64,
    pub n_mu: usize,
}

impl From<GridSpec> for GridSummary {
    fn from(g: GridSpec) -> Self {
        Self { r_max: g.r_max, n_r: g.n_r, n_theta: g.n_theta, n_phi: g.n_phi, lambda: g.lambda, n_mu: g.n_mu }
    }
}

impl HeatRecord {
    pub fn new(operation: &str, grid: GridSpec, t: f64, lhs: f64, rhs: f64, tol: f64) -> Self {
        let gap = rel_gap(lhs, rhs);
        Self {
            operation: operation.into(),
            model: grid.model.name().into(),
            t,
            grids: grid.into(),
            lhs,
            rhs,
            rel_gap: gap,
            verdict: if gap <= tol { "pass" } else { "fail" }.into(),
        }
    }
}
