use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("gamma function pole at z = {0}")]
    GammaPole(f64),
    #[error("argument {re}{im:+}i lies on or within 1e-6 of the branch cut (-inf, -1]")]
    BranchCut { re: f64, im: f64 },
    #[error("series or continuation did not converge: {0}")]
    NonConvergence(String),
    #[error("quadrature window leaves tail mass {0:e}")]
    QuadratureWindow(f64),
    #[error("function has mass {0:e} near the edge of the grid")]
    EdgeMass(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("point at |Y| = {0} is outside the crown interior")]
    CrownBoundary(f64),
    #[error("Iwasawa decomposition failed: {0}")]
    Decomposition(String),
    #[error("cutoff violation: {0}")]
    Cutoff(String),
    #[error("spectral amplification {0:e} exceeds the allowed limit")]
    AmplificationOverflow(f64),
    #[error("ill-conditioned least-squares system (condition estimate {0:e})")]
    IllConditioned(f64),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("table format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
