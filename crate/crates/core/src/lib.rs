//! Heat kernel (Segal–Bargmann) transforms on the line, the hyperbolic plane
//! and hyperbolic 3-space, with numerical checks of their norm identities,
//! the Gutzmer identity and the non-Bergman obstructions.

pub mod bergman;
pub mod config;
pub mod crown;
pub mod error;
pub mod experiments;
pub mod flat;
pub mod fourier;
pub mod heat;
pub mod models;
pub mod quadrature;
pub mod special;
pub mod spherical;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/flat.md")]
    mod flat {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/heat.md")]
    mod heat {}
    #[doc = include_str!("../../../book/src/obstructions.md")]
    mod obstructions {}
    #[doc = include_str!("../../../book/src/crown.md")]
    mod crown {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
