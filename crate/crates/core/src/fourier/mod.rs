//! Helgason Fourier transform f̂(b, λ) = ∫_X f(x) a(b·x)^{ρ−λ} dx, its
//! inversion against the Plancherel measure and the Plancherel check, on
//! a radial × angular grid for X and an angular × μ grid for B × ℝ₊.
//!
//! The boundary grid coincides with the angular part of the X grid. With
//! harmonics Y orthonormal for the normalized boundary measure the
//! transform is diagonal: a mode coefficient f_Y(r) maps to
//! F_Y(μ) = ∫ f_Y(r)·κ_deg(Y)(r, ρ₁ − iμ)·J(r) dr.

pub mod angular;
pub mod io;
pub mod kernels;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::models::{haar_kak_density, horocycle_q, BoundaryPoint, CrownPoint, Model};
use crate::quadrature::{gauss_legendre, linspace, trapezoid_weights};
use crate::spherical::Plancherel;
use crate::C64;

pub use angular::Angular;

/// Grid parameters shared by X-functions and Fourier tables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub model: Model,
    /// Radial cutoff R in the A-coordinate (distance 2R).
    pub r_max: f64,
    /// Gauss–Legendre radial nodes on [0, R].
    pub n_r: usize,
    /// Gauss nodes in cos θ (H³); 1 for H².
    pub n_theta: usize,
    /// Uniform angles: α on the circle (H²), φ on the sphere (H³).
    pub n_phi: usize,
    /// Spectral cutoff Λ.
    pub lambda: f64,
    /// Equispaced μ-nodes on [0, Λ] with trapezoid weights.
    pub n_mu: usize,
}

impl GridSpec {
    pub fn default_for(model: Model) -> Self {
        match model {
            Model::H2 => Self { model, r_max: 4.0, n_r: 160, n_theta: 1, n_phi: 128, lambda: 20.0, n_mu: 201 },
            Model::H3 => Self { model, r_max: 4.0, n_r: 128, n_theta: 24, n_phi: 48, lambda: 20.0, n_mu: 201 },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if !(self.r_max > 1.0 && self.r_max.is_finite()) {
            return bad("r_max must exceed 1");
        }
        if self.n_r < 2 || self.n_mu < 2 || self.n_phi < 4 || !self.n_phi.is_multiple_of(2) {
            return bad("grid sizes too small (n_r, n_mu ≥ 2; n_phi even ≥ 4)");
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return bad("lambda must be positive");
        }
        match self.model {
            Model::H2 if self.n_theta != 1 => bad("n_theta must be 1 for H2"),
            Model::H3 if self.n_theta < 2 => bad("n_theta must be at least 2 for H3"),
            _ => Ok(()),
        }
    }

    /// Radial nodes and weights.
    pub fn radial(&self) -> (Vec<f64>, Vec<f64>) {
        gauss_legendre(self.n_r, 0.0, self.r_max)
    }

    /// μ-nodes and trapezoid weights.
    pub fn mu_grid(&self) -> (Vec<f64>, Vec<f64>) {
        (linspace(self.n_mu, 0.0, self.lambda), trapezoid_weights(self.n_mu, 0.0, self.lambda))
    }

    pub fn angular(&self) -> Angular {
        match self.model {
            Model::H2 => Angular::circle(self.n_phi),
            Model::H3 => Angular::sphere(self.n_theta, self.n_phi),
        }
    }

    pub fn n_ang(&self) -> usize {
        self.n_theta * self.n_phi
    }

    /// Real point at radius r in the direction of the j-th angular node.
    pub fn point(&self, r: f64, dir: [f64; 3]) -> CrownPoint {
        match self.model {
            Model::H2 => CrownPoint::polar_h2(r, dir[1].atan2(dir[0])),
            Model::H3 => CrownPoint::polar_h3(r, dir),
        }
    }

    /// Boundary point for an angular node.
    pub fn boundary(&self, dir: [f64; 3]) -> BoundaryPoint {
        match self.model {
            Model::H2 => BoundaryPoint::circle(dir[1].atan2(dir[0])),
            Model::H3 => BoundaryPoint::Sphere(dir),
        }
    }
}

/// A function on X sampled at (r_i, direction_j), row-major in r.
#[derive(Debug, Clone, PartialEq)]
pub struct XFunction {
    pub grid: GridSpec,
    pub values: Vec<C64>,
}

impl XFunction {
    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, values: vec![C64::new(0.0, 0.0); grid.n_r * grid.n_ang()] }
    }

    /// Samples `f(r, direction)`.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, [f64; 3]) -> C64) -> Self {
        let (rs, _) = grid.radial();
        let ang = grid.angular();
        let mut values = Vec::with_capacity(rs.len() * ang.len());
        for r in &rs {
            for dir in &ang.points {
                values.push(f(*r, *dir));
            }
        }
        Self { grid, values }
    }

    /// Samples a function of the radius only.
    pub fn from_radial(grid: GridSpec, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |r, _| C64::new(f(r), 0.0))
    }

    /// Samples a function of the point.
    pub fn from_points(grid: GridSpec, f: impl Fn(&CrownPoint) -> C64) -> Self {
        Self::from_fn(grid, |r, dir| f(&grid.point(r, dir)))
    }

    fn shell_masses(&self) -> Vec<f64> {
        let (rs, ws) = self.grid.radial();
        let ang = self.grid.angular();
        let n = ang.len();
        rs.iter()
            .zip(&ws)
            .enumerate()
            .map(|(i, (r, w))| {
                let s: f64 = self.values[i * n..(i + 1) * n].iter().zip(&ang.weights).map(|(v, a)| a * v.norm_sqr()).sum();
                w * haar_kak_density(self.grid.model, *r) * s
            })
            .collect()
    }

    /// ‖f‖² with the Riemannian volume.
    pub fn norm_sq(&self) -> f64 {
        self.shell_masses().iter().sum()
    }

    /// Fraction of ‖f‖² carried by r > R − 1.
    pub fn edge_fraction(&self) -> f64 {
        let (rs, _) = self.grid.radial();
        let m = self.shell_masses();
        let total: f64 = m.iter().sum();
        if total == 0.0 {
            return 0.0;
        }
        rs.iter().zip(&m).filter(|(r, _)| **r > self.grid.r_max - 1.0).map(|(_, m)| m).sum::<f64>() / total
    }

    /// Relative L² distance ‖f − g‖/‖g‖.
    pub fn rel_l2_err(&self, reference: &XFunction) -> f64 {
        let diff = XFunction {
            grid: self.grid,
            values: self.values.iter().zip(&reference.values).map(|(a, b)| a - b).collect(),
        };
        (diff.norm_sq() / reference.norm_sq()).sqrt()
    }

    pub fn scale(&self, a: C64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|v| v * a).collect() }
    }

    pub fn add(&self, other: &XFunction) -> Self {
        Self { grid: self.grid, values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() }
    }
}

/// f̂(b_j, μ_k) stored at j·n_mu + k.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierTable {
    pub grid: GridSpec,
    pub values: Vec<C64>,
}

impl FourierTable {
    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, values: vec![C64::new(0.0, 0.0); grid.n_ang() * grid.n_mu] }
    }

    /// Tabulates `f(b, μ)` over the boundary and μ grids.
    pub fn from_fn(grid: GridSpec, f: impl Fn(&BoundaryPoint, f64) -> C64) -> Self {
        let ang = grid.angular();
        let (mus, _) = grid.mu_grid();
        let mut values = Vec::with_capacity(ang.len() * mus.len());
        for dir in &ang.points {
            let b = grid.boundary(*dir);
            for mu in &mus {
                values.push(f(&b, *mu));
            }
        }
        Self { grid, values }
    }

    pub fn at(&self, j: usize, k: usize) -> C64 {
        self.values[j * self.grid.n_mu + k]
    }

    /// ∬ |f̂|² dμ(b, λ).
    pub fn norm_sq(&self, plancherel: &Plancherel) -> f64 {
        let ang = self.grid.angular();
        let (mus, wm) = self.grid.mu_grid();
        let dens: Vec<f64> = mus.iter().zip(&wm).map(|(m, w)| w * plancherel.density(*m)).collect();
        ang.weights
            .iter()
            .enumerate()
            .map(|(j, wb)| {
                wb * dens.iter().enumerate().map(|(k, d)| d * self.at(j, k).norm_sqr()).sum::<f64>()
            })
            .sum()
    }

    /// Largest |f̂| at the last μ-node relative to the largest |f̂| overall.
    pub fn cutoff_fraction(&self) -> f64 {
        let n = self.grid.n_mu;
        let top = self.values.iter().fold(0.0f64, |a, v| a.max(v.norm()));
        if top == 0.0 {
            return 0.0;
        }
        self.values.chunks(n).fold(0.0f64, |a, row| a.max(row[n - 1].norm())) / top
    }

    /// Entrywise product with a function of μ.
    pub fn multiply_mu(&self, g: impl Fn(f64) -> C64) -> Self {
        let (mus, _) = self.grid.mu_grid();
        let n = self.grid.n_mu;
        let values = self.values.iter().enumerate().map(|(i, v)| v * g(mus[i % n])).collect();
        Self { grid: self.grid, values }
    }

    pub fn add(&self, other: &FourierTable) -> Self {
        Self { grid: self.grid, values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, a: C64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|v| v * a).collect() }
    }

    /// Relative distance ‖F − G‖/‖G‖ in the Plancherel norm.
    pub fn rel_err(&self, reference: &FourierTable, plancherel: &Plancherel) -> f64 {
        let diff = FourierTable {
            grid: self.grid,
            values: self.values.iter().zip(&reference.values).map(|(a, b)| a - b).collect(),
        };
        (diff.norm_sq(plancherel) / reference.norm_sq(plancherel)).sqrt()
    }
}

/// Fourier table of the heat kernel with time s centred at `center`:
/// e^{−s(μ² + |ρ|²)}·a(b·y)^{ρ−λ}, set to zero beyond `support` when given.
pub fn heat_bump_table(grid: GridSpec, s: f64, center: &CrownPoint, support: Option<f64>) -> FourierTable {
    let rho1 = grid.model.rho1();
    let rho2 = grid.model.rho2();
    FourierTable::from_fn(grid, |b, mu| {
        if support.is_some_and(|l| mu > l) {
            return C64::new(0.0, 0.0);
        }
        let q = horocycle_q(center, b);
        (C64::new(-rho1, mu) * q.ln()).exp() * (-s * (mu * mu + rho2)).exp()
    })
}

/// Precomputed quadrature and mode kernels for one grid.
#[derive(Debug, Clone)]
pub struct FourierPlan {
    pub grid: GridSpec,
    pub plancherel: Plancherel,
    angular: Angular,
    r_nodes: Vec<f64>,
    /// w_i·J(r_i)
    r_measure: Vec<f64>,
    mus: Vec<f64>,
    /// w_k·c_X|c(μ_k)|⁻²
    mu_measure: Vec<f64>,
    /// κ_deg(r_i, ρ₁ − iμ_k) at [deg][i·n_mu + k]
    kernels: Vec<Vec<C64>>,
}

impl FourierPlan {
    pub fn new(grid: GridSpec, cx: f64) -> Result<Self> {
        grid.validate()?;
        if !(cx > 0.0 && cx.is_finite()) {
            return Err(Error::Config(format!("c_X = {cx} must be positive")));
        }
        let angular = grid.angular();
        let (r_nodes, wr) = grid.radial();
        let r_measure = r_nodes.iter().zip(&wr).map(|(r, w)| w * haar_kak_density(grid.model, *r)).collect();
        let (mus, wm) = grid.mu_grid();
        let plancherel = Plancherel::new(grid.model, cx);
        let mu_measure = mus.iter().zip(&wm).map(|(m, w)| w * plancherel.density(*m)).collect();
        let deg_max = angular.max_degree();
        let mut kernels = vec![Vec::with_capacity(grid.n_r * grid.n_mu); deg_max + 1];
        for r in &r_nodes {
            for (deg, row) in kernels::mode_kernels(grid.model, *r, &mus, deg_max).into_iter().enumerate() {
                kernels[deg].extend(row);
            }
        }
        Ok(Self { grid, plancherel, angular, r_nodes, r_measure, mus, mu_measure, kernels })
    }

    pub fn angular(&self) -> &Angular {
        &self.angular
    }

    pub fn r_nodes(&self) -> &[f64] {
        &self.r_nodes
    }

    pub fn mu_nodes(&self) -> &[f64] {
        &self.mus
    }

    /// w_k·c_X|c(μ_k)|⁻².
    pub fn mu_measure(&self) -> &[f64] {
        &self.mu_measure
    }

    fn check_grid(&self, other: &GridSpec) -> Result<()> {
        if *other != self.grid {
            return Err(Error::GridMismatch(format!("{other:?} vs plan {:?}", self.grid)));
        }
        Ok(())
    }

    /// Mode coefficients f_Y(r_i) at [i][mode].
    pub fn x_modes(&self, f: &XFunction) -> Vec<Vec<C64>> {
        f.values.chunks(self.angular.len()).map(|row| self.angular.analyze(row)).collect()
    }

    /// Mode coefficients F_Y(μ_k) at [k][mode].
    pub fn table_modes(&self, t: &FourierTable) -> Vec<Vec<C64>> {
        let n = self.grid.n_mu;
        (0..n)
            .map(|k| {
                let col: Vec<C64> = (0..self.angular.len()).map(|j| t.values[j * n + k]).collect();
                self.angular.analyze(&col)
            })
            .collect()
    }

    /// Table from spectral mode coefficients at [k][mode].
    pub fn table_from_modes(&self, modes: &[Vec<C64>]) -> FourierTable {
        let n = self.grid.n_mu;
        let mut t = FourierTable::zeros(self.grid);
        for (k, m) in modes.iter().enumerate() {
            for (j, v) in self.angular.synthesize(m).into_iter().enumerate() {
                t.values[j * n + k] = v;
            }
        }
        t
    }

    /// f̂ without the cutoff check.
    pub fn forward_unchecked(&self, f: &XFunction) -> Result<FourierTable> {
        self.check_grid(&f.grid)?;
        let xm = self.x_modes(f);
        let n_mu = self.grid.n_mu;
        let n_modes = self.angular.n_modes();
        let mut spec = vec![vec![C64::new(0.0, 0.0); n_modes]; n_mu];
        for mode in 0..n_modes {
            let kern = &self.kernels[self.angular.degree(mode)];
            for (i, w) in self.r_measure.iter().enumerate() {
                let c = xm[i][mode] * *w;
                if c == C64::new(0.0, 0.0) {
                    continue;
                }
                let row = &kern[i * n_mu..(i + 1) * n_mu];
                for k in 0..n_mu {
                    spec[k][mode] += c * row[k];
                }
            }
        }
        Ok(self.table_from_modes(&spec))
    }

    /// f̂(b, λ) by quadrature over the X grid. Fails when more than 1e−10
    /// of ‖f‖² sits in r > R − 1.
    pub fn forward(&self, f: &XFunction) -> Result<FourierTable> {
        let edge = f.edge_fraction();
        if edge > 1e-10 {
            return Err(Error::Cutoff(format!("{edge:.3e} of the mass lies in r > R − 1")));
        }
        self.forward_unchecked(f)
    }

    /// Inversion without the spectral cutoff check.
    pub fn invert_unchecked(&self, t: &FourierTable) -> Result<XFunction> {
        self.check_grid(&t.grid)?;
        let tm = self.table_modes(t);
        let n_mu = self.grid.n_mu;
        let n_modes = self.angular.n_modes();
        let mut out = XFunction::zeros(self.grid);
        let mut xm = vec![vec![C64::new(0.0, 0.0); n_modes]; self.grid.n_r];
        for mode in 0..n_modes {
            let weighted: Vec<C64> = (0..n_mu).map(|k| tm[k][mode] * self.mu_measure[k]).collect();
            if weighted.iter().all(|v| *v == C64::new(0.0, 0.0)) {
                continue;
            }
            let kern = &self.kernels[self.angular.degree(mode)];
            for (i, slot) in xm.iter_mut().enumerate() {
                let row = &kern[i * n_mu..(i + 1) * n_mu];
                slot[mode] = weighted.iter().zip(row).map(|(a, b)| a * b.conj()).sum();
            }
        }
        let n_ang = self.angular.len();
        for (i, m) in xm.iter().enumerate() {
            out.values[i * n_ang..(i + 1) * n_ang].copy_from_slice(&self.angular.synthesize(m));
        }
        Ok(out)
    }

    /// f(x) = ∬ f̂(b, λ) a(b·x)^{ρ+λ} dμ(b, λ). Fails when f̂ at Λ exceeds
    /// 1e−10 of its maximum.
    pub fn invert(&self, t: &FourierTable) -> Result<XFunction> {
        let frac = t.cutoff_fraction();
        if frac > 1e-10 {
            return Err(Error::Cutoff(format!("|f̂| at Λ is {frac:.3e} of its maximum")));
        }
        self.invert_unchecked(t)
    }

    /// (‖f‖², ∬|f̂|² dμ).
    pub fn plancherel_check(&self, f: &XFunction) -> Result<(f64, f64)> {
        let t = self.forward(f)?;
        Ok((f.norm_sq(), t.norm_sq(&self.plancherel)))
    }

    /// Inverse transform of coefficients supported in μ ≤ Λ_PW < Λ.
    pub fn band_limited_synth(&self, coeffs: &FourierTable, lambda_pw: f64) -> Result<XFunction> {
        if !(lambda_pw < self.grid.lambda) {
            return Err(Error::Cutoff(format!("Λ_PW = {lambda_pw} must be below Λ = {}", self.grid.lambda)));
        }
        let n = self.grid.n_mu;
        for (i, v) in coeffs.values.iter().enumerate() {
            if self.mus[i % n] > lambda_pw && *v != C64::new(0.0, 0.0) {
                return Err(Error::Cutoff(format!("coefficient at μ = {} beyond Λ_PW", self.mus[i % n])));
            }
        }
        self.invert_unchecked(coeffs)
    }
}

/// Gaussian bump in the geodesic distance d = 2r with width 0.5.
pub fn reference_bump(r: f64) -> f64 {
    let d = 2.0 * r;
    (-d * d / (2.0 * 0.25)).exp()
}

/// Outcome of the one-time measure calibration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub cx: f64,
    /// ‖f‖² of the reference bump.
    pub lhs: f64,
    /// ∫|f̂|² |c|⁻² dμ with c_X = 1.
    pub rhs_unit: f64,
}

/// Fixes c_X so that Plancherel holds exactly on [`reference_bump`].
pub fn calibrate(grid: GridSpec) -> Result<Calibration> {
    let plan = FourierPlan::new(grid, 1.0)?;
    let f = XFunction::from_radial(grid, reference_bump);
    let (lhs, rhs_unit) = plan.plancherel_check(&f)?;
    Ok(Calibration { cx: lhs / rhs_unit, lhs, rhs_unit })
}

/// The analytic normalization 1/(2π²) for comparison with [`calibrate`].
pub fn analytic_cx() -> f64 {
    1.0 / (2.0 * PI * PI)
}

/// Spectral support of the synthetic band-limited family.
pub const FAMILY_SUPPORT: f64 = 16.0;

/// Seeded family of band-limited test functions, given by their Fourier
/// tables: complex combinations of one to three heat kernels with times in
/// [0.1, 0.25], centred within distance 0.6 of the base point and truncated
/// at [`FAMILY_SUPPORT`].
pub fn band_limited_family(grid: GridSpec, seed: u64, count: usize) -> Vec<FourierTable> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let terms = rng.random_range(1..=3);
            let mut t = FourierTable::zeros(grid);
            for _ in 0..terms {
                let s = rng.random_range(0.1..0.25);
                let r = rng.random_range(0.0..0.3);
                let center = match grid.model {
                    Model::H2 => CrownPoint::polar_h2(r, rng.random_range(0.0..2.0 * PI)),
                    Model::H3 => {
                        let z: f64 = rng.random_range(-1.0..1.0);
                        let ph: f64 = rng.random_range(0.0..2.0 * PI);
                        let rho = (1.0 - z * z).sqrt();
                        CrownPoint::polar_h3(r, [rho * ph.cos(), rho * ph.sin(), z])
                    }
                };
                let c = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                t = t.add(&heat_bump_table(grid, s, &center, Some(FAMILY_SUPPORT)).scale(c));
            }
            t
        })
        .collect()
}
