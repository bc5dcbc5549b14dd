//! Concrete geometry of H² = SL(2,ℝ)/SO(2) and H³ = SL(2,ℂ)/SU(2).
//!
//! Coordinates: a_r = diag(e^r, e^{−r}) moves the base point a geodesic
//! distance 2r, and the crown coordinate Y stands for exp(iY·H₀) with
//! H₀ = diag(1, −1), so that Ω = (−π/4, π/4).
//!
//! Points are handled through a Gram matrix Q: for H² with coset
//! representative m, Q = m·mᵀ; for H³ the representative is already the
//! Hermitian-model point Q = g·gᴴ, and crown points continue this as
//! g·exp(2iY·H₀)·gᴴ. The horocycle bracket of b·z is
//! log a = −½ log(v_b Q v_bᵀ) (H²) or −½ log(v_b Q v_bᴴ) (H³), where v_b
//! is the second row of the rotation representing b.

use std::f64::consts::{FRAC_PI_4, PI};

use nalgebra::Matrix2;
use rand::Rng;

use crate::error::{Error, Result};
use crate::C64;

pub type Mat2 = Matrix2<C64>;

const DET_TOL: f64 = 1e-12;

/// The two curved models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// H², G = SL(2,ℝ).
    H2,
    /// H³, G = SL(2,ℂ).
    H3,
}

impl Model {
    /// Exponent ρ₁ in a(bz)^{ρ+λ} = q^{−(ρ₁+iμ)}.
    pub fn rho1(self) -> f64 {
        match self {
            Model::H2 => 0.5,
            Model::H3 => 1.0,
        }
    }

    /// |ρ|².
    pub fn rho2(self) -> f64 {
        self.rho1() * self.rho1()
    }

    pub fn dim(self) -> usize {
        match self {
            Model::H2 => 2,
            Model::H3 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::H2 => "h2",
            Model::H3 => "h3",
        }
    }

    /// Inverse of [`Model::name`], case-insensitive.
    pub fn from_name(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "h2" => Some(Model::H2),
            "h3" => Some(Model::H3),
            _ => None,
        }
    }
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn det(m: &Mat2) -> C64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

fn conj_transpose(m: &Mat2) -> Mat2 {
    m.transpose().map(|z| z.conj())
}

/// An element of SL(2,ℝ) or SL(2,ℂ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    pub m: Mat2,
    pub model: Model,
}

impl GroupElement {
    pub fn new(m: Mat2, model: Model) -> Result<Self> {
        if (det(&m) - 1.0).norm() > DET_TOL * (1.0 + m.norm_squared()) {
            return Err(Error::Domain(format!("det = {} is not 1", det(&m))));
        }
        if model == Model::H2 && m.iter().any(|z| z.im.abs() > DET_TOL * (1.0 + z.norm())) {
            return Err(Error::Domain("SL(2,R) element with complex entries".into()));
        }
        Ok(Self { m, model })
    }

    pub fn identity(model: Model) -> Self {
        Self { m: Mat2::identity(), model }
    }

    /// a_r = diag(e^r, e^{−r}).
    pub fn a(model: Model, r: f64) -> Self {
        Self { m: Mat2::new(c(r.exp()), c(0.0), c(0.0), c((-r).exp())), model }
    }

    /// n_x = [[1, x], [0, 1]].
    pub fn n(model: Model, x: C64) -> Self {
        Self { m: Mat2::new(c(1.0), x, c(0.0), c(1.0)), model }
    }

    /// k_θ = [[cos θ, sin θ], [−sin θ, cos θ]].
    pub fn k(model: Model, theta: f64) -> Self {
        let (s, co) = theta.sin_cos();
        Self { m: Mat2::new(c(co), c(s), c(-s), c(co)), model }
    }

    /// Element [[α, β], [−β̄, ᾱ]] of SU(2) after normalizing (α, β).
    pub fn su2(alpha: C64, beta: C64) -> Self {
        let n = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        let (a, b) = (alpha / n, beta / n);
        Self { m: Mat2::new(a, b, -b.conj(), a.conj()), model: Model::H3 }
    }

    /// Rotation by angle φ about the axis of A in H³: diag(e^{iφ/2}, e^{−iφ/2}).
    pub fn spin_z(phi: f64) -> Self {
        Self {
            m: Mat2::new(C64::from_polar(1.0, 0.5 * phi), c(0.0), c(0.0), C64::from_polar(1.0, -0.5 * phi)),
            model: Model::H3,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { m: self.m * other.m, model: self.model }
    }

    pub fn inverse(&self) -> Self {
        let m = &self.m;
        Self { m: Mat2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]), model: self.model }
    }

    pub fn det(&self) -> C64 {
        det(&self.m)
    }
}

/// A point of the complexification X_ℂ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrownPoint {
    /// H²: coset representative m; H³: Hermitian-model matrix.
    pub rep: Mat2,
    pub model: Model,
    /// Crown coordinates (g, Y) when the point was built as g·exp(iY)·x_o.
    pub coords: Option<(GroupElement, f64)>,
}

/// Open interval Ω in the Y-coordinate, the same for both models.
pub fn crown_omega(_model: Model) -> (f64, f64) {
    (-FRAC_PI_4, FRAC_PI_4)
}

/// Membership in the open interval Ω.
pub fn in_omega(model: Model, y: f64) -> bool {
    let (lo, hi) = crown_omega(model);
    lo < y && y < hi
}

fn diag_exp(y: f64) -> Mat2 {
    Mat2::new(C64::from_polar(1.0, y), c(0.0), c(0.0), C64::from_polar(1.0, -y))
}

impl CrownPoint {
    pub fn origin(model: Model) -> Self {
        Self { rep: Mat2::identity(), model, coords: Some((GroupElement::identity(model), 0.0)) }
    }

    /// g·exp(iY)·x_o for Y ∈ Ω.
    pub fn from_coords(g: GroupElement, y: f64) -> Result<Self> {
        if !in_omega(g.model, y) {
            return Err(Error::CrownBoundary(y.abs()));
        }
        let mut z = Self::complexified(g, y);
        z.coords = Some((g, y));
        Ok(z)
    }

    /// g·exp(iY)·x_o for any real Y, without crown coordinates attached.
    pub fn complexified(g: GroupElement, y: f64) -> Self {
        let rep = match g.model {
            Model::H2 => g.m * diag_exp(y),
            Model::H3 => g.m * diag_exp(2.0 * y) * conj_transpose(&g.m),
        };
        Self { rep, model: g.model, coords: None }
    }

    /// Real point g·x_o.
    pub fn real(g: GroupElement) -> Self {
        Self::from_coords(g, 0.0).expect("Y = 0 lies in Ω")
    }

    /// H² point at polar coordinates (r, α): k_{−α/2}·a_r·x_o.
    pub fn polar_h2(r: f64, alpha: f64) -> Self {
        let g = GroupElement::k(Model::H2, -0.5 * alpha).mul(&GroupElement::a(Model::H2, r));
        Self::real(g)
    }

    /// H³ point at distance 2r from x_o in the unit direction `n`:
    /// cosh 2r·I + sinh 2r·(n·σ).
    pub fn polar_h3(r: f64, n: [f64; 3]) -> Self {
        let (ch, sh) = ((2.0 * r).cosh(), (2.0 * r).sinh());
        let rep = Mat2::new(
            c(ch + sh * n[2]),
            C64::new(sh * n[0], -sh * n[1]),
            C64::new(sh * n[0], sh * n[1]),
            c(ch - sh * n[2]),
        );
        Self { rep, model: Model::H3, coords: None }
    }

    /// Gram matrix Q used by the horocycle bracket and the invariants.
    pub fn gram(&self) -> Mat2 {
        match self.model {
            Model::H2 => self.rep * self.rep.transpose(),
            Model::H3 => self.rep,
        }
    }

    /// Left action of a group element.
    pub fn act(&self, g: &GroupElement) -> Self {
        let rep = match self.model {
            Model::H2 => g.m * self.rep,
            Model::H3 => g.m * self.rep * conj_transpose(&g.m),
        };
        let coords = self.coords.map(|(h, y)| (g.mul(&h), y));
        Self { rep, model: self.model, coords }
    }

    pub fn det(&self) -> C64 {
        det(&self.rep)
    }

    /// Half-trace of the Gram matrix: cosh(distance) on real points.
    pub fn half_trace(&self) -> C64 {
        let q = self.gram();
        0.5 * (q[(0, 0)] + q[(1, 1)])
    }
}

/// A point of the boundary B = M\K.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPoint {
    /// H²: angle β ∈ [0, 2π), represented by k_{β/2}.
    Circle(f64),
    /// H³: unit vector on S².
    Sphere([f64; 3]),
}

impl BoundaryPoint {
    pub fn circle(beta: f64) -> Self {
        BoundaryPoint::Circle(beta.rem_euclid(2.0 * PI))
    }

    pub fn sphere(v: [f64; 3]) -> Result<Self> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(n > 0.0) {
            return Err(Error::Domain("zero boundary direction".into()));
        }
        Ok(BoundaryPoint::Sphere([v[0] / n, v[1] / n, v[2] / n]))
    }

    /// Second row of the rotation representing b.
    pub fn row(&self) -> [C64; 2] {
        match *self {
            BoundaryPoint::Circle(beta) => {
                let (s, co) = (0.5 * beta).sin_cos();
                [c(-s), c(co)]
            }
            BoundaryPoint::Sphere(b) => sphere_row(b),
        }
    }
}

/// Row v = (p, q) with |p|² − |q|² = −b₃ and 2p·q̄ = −(b₁ + i b₂).
pub fn sphere_row(b: [f64; 3]) -> [C64; 2] {
    let p = (0.5 * (1.0 - b[2])).max(0.0).sqrt();
    if p < 1e-300 {
        return [c(0.0), c(1.0)];
    }
    let q = -C64::new(b[0], -b[1]) / (2.0 * p);
    [c(p), q]
}

/// The quadratic form q(b, z) = v_b Q v_bᵀ (H²) or v_b Q v_bᴴ (H³).
pub fn horocycle_q(z: &CrownPoint, b: &BoundaryPoint) -> C64 {
    let q = z.gram();
    let v = b.row();
    let w = match z.model {
        Model::H2 => v,
        Model::H3 => [v[0].conj(), v[1].conj()],
    };
    v[0] * q[(0, 0)] * w[0] + v[0] * q[(0, 1)] * w[1] + v[1] * q[(1, 0)] * w[0] + v[1] * q[(1, 1)] * w[1]
}

/// log a(b·z) = −½ Log q(b, z) with the principal branch.
pub fn horocycle_a(z: &CrownPoint, b: &BoundaryPoint) -> Result<C64> {
    let q = horocycle_q(z, b);
    if q.norm() < 1e-300 || (q.im == 0.0 && q.re < 0.0) {
        return Err(Error::Decomposition(format!("q(b, z) = {q} leaves N_C A_C x_o")));
    }
    Ok(-0.5 * q.ln())
}

/// Volume density in KAK coordinates with normalized dk:
/// 4π sinh 2r (H²) and 8π sinh² 2r (H³).
pub fn haar_kak_density(model: Model, r: f64) -> f64 {
    match model {
        Model::H2 => 4.0 * PI * (2.0 * r).sinh(),
        Model::H3 => 8.0 * PI * (2.0 * r).sinh().powi(2),
    }
}

/// P(z) = tr(m·mᵀ) for H²; the analogous tr(Q) for H³.
pub fn p_function(z: &CrownPoint) -> C64 {
    let q = z.gram();
    q[(0, 0)] + q[(1, 1)]
}

/// Which K_ℂ-invariant domain to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HatDomain {
    Omega,
    TwoOmega,
}

/// Membership in X̂_{ℂ,Ω} (Re P > 0) or X̂_{ℂ,2Ω} (P ∉ (−∞, −2]).
/// Values within 1e−12·(1 + |P|) of the cut count as on it.
pub fn in_hat_domain(z: &CrownPoint, which: HatDomain) -> Result<bool> {
    if z.model != Model::H2 {
        return Err(Error::Domain("the P-domains are defined for SL(2,R)".into()));
    }
    let p = p_function(z);
    Ok(match which {
        HatDomain::Omega => p.re > 0.0,
        HatDomain::TwoOmega => !(p.im.abs() <= 1e-12 * (1.0 + p.norm()) && p.re <= -2.0),
    })
}

fn check_curve_angle(phi: f64) -> Result<()> {
    if !(FRAC_PI_4 < phi.abs() && phi.abs() < 2.0 * FRAC_PI_4) {
        return Err(Error::Domain(format!("φ = {phi} must satisfy π/4 < |φ| < π/2")));
    }
    Ok(())
}

/// Diagonal entry a(s) of the curve γ(s).
pub fn curve_a(phi: f64, s: f64) -> f64 {
    let root = (-(2.0 * phi).cos()).sqrt();
    (root + s * (1.0 - root)) / root
}

/// γ(s)·exp(iφH₀)·x_o with γ(s) = [[a, b], [0, 1/a]], b = √(a² − a⁻²).
/// Defined for every s ≥ 0; s > 1 continues the curve past P = −2.
pub fn boundary_curve_point(phi: f64, s: f64) -> Result<CrownPoint> {
    check_curve_angle(phi)?;
    let a = curve_a(phi, s);
    let b = (a * a - 1.0 / (a * a)).max(0.0).sqrt();
    let gamma = GroupElement { m: Mat2::new(c(a), c(b), c(0.0), c(1.0 / a)), model: Model::H2 };
    Ok(CrownPoint::complexified(gamma, phi))
}

/// σ(s) = P(γ(s)·exp(iφH₀)·x_o) for s ∈ [0, 1].
pub fn boundary_curve_sigma(phi: f64, s: f64) -> Result<C64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!("s = {s} outside [0, 1]")));
    }
    Ok(p_function(&boundary_curve_point(phi, s)?))
}

/// Random SO(2)·A·SO(2) element with r ∈ [0, r_max].
pub fn random_h2<R: Rng + ?Sized>(rng: &mut R, r_max: f64) -> GroupElement {
    let k1 = GroupElement::k(Model::H2, rng.random_range(0.0..PI));
    let k2 = GroupElement::k(Model::H2, rng.random_range(0.0..PI));
    k1.mul(&GroupElement::a(Model::H2, rng.random_range(0.0..r_max))).mul(&k2)
}

/// Haar-random element of SU(2).
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> GroupElement {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 > 1e-6 && n2 <= 1.0 {
            return GroupElement::su2(C64::new(v[0], v[1]), C64::new(v[2], v[3]));
        }
    }
}

/// Random SU(2)·A·SU(2) element with r ∈ [0, r_max].
pub fn random_h3<R: Rng + ?Sized>(rng: &mut R, r_max: f64) -> GroupElement {
    let k1 = random_su2(rng);
    let k2 = random_su2(rng);
    k1.mul(&GroupElement::a(Model::H3, rng.random_range(0.0..r_max))).mul(&k2)
}
