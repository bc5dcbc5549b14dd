//! Complex special functions: Γ, ₂F₁, conical Legendre functions and the
//! Gaussian moment of the symmetrized exponential.

mod gamma;
mod hypergeometric;
mod legendre;
mod moments;

pub use gamma::{gamma_complex, ln_gamma_complex};
pub use hypergeometric::hyp2f1;
pub use legendre::{legendre_conical, legendre_conical_with_derivative};
pub use moments::{gaussian_psi_moment, gaussian_psi_moment_windowed, PsiMoment};
