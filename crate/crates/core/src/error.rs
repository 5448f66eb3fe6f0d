//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate jet at (u,v)=({u},{v}): Gram determinant {det:.3e} below threshold {threshold:.3e}")]
    DegenerateJet { u: f64, v: f64, det: f64, threshold: f64 },

    #[error("surface is not Lagrangian at this point: |omega(phi_u,phi_v)| = {residual:.3e} exceeds {tol:.3e}")]
    NonLagrangian { residual: f64, tol: f64 },

    #[error("point does not lie on the sphere of radius sqrt(2): |phi|^2 = {phi2:.12} (tolerance {tol:.3e})")]
    NonSpherical { phi2: f64, tol: f64 },

    #[error("grid mismatch: field has {got} samples, surface has {expected}")]
    GridMismatch { expected: usize, got: usize },

    #[error("immersion is not periodic on the declared domain: endpoint mismatch {mismatch:.3e} exceeds {tol:.3e}")]
    AperiodicInput { mismatch: f64, tol: f64 },

    #[error("inconsistent initial data for curve integration: {0}")]
    InconsistentInitialData(String),

    #[error("curve integrator failed: {0}")]
    IntegratorFailure(String),

    #[error("first-integral drift {drift:.3e} exceeds {tol:.3e}")]
    ExcessiveDrift { drift: f64, tol: f64 },

    #[error("conserved constant corresponds to a circle: radius does not oscillate")]
    CircleDegenerate,

    #[error("rotation number {p}/{q} is outside the admissible open interval ({lo}, {hi})")]
    InadmissibleRotation { p: u32, q: u32, lo: f64, hi: f64 },

    #[error("root finder failed to bracket the target rotation number {target}")]
    BracketFailure { target: f64 },

    #[error("inadmissible family parameters: {0}")]
    InadmissibleParams(String),

    #[error("total curvature integral gives non-integer genus {genus:.6} (tolerance {tol})")]
    NonIntegerGenus { genus: f64, tol: f64 },

    #[error("operation requires a closed surface sampled on a full fundamental domain")]
    NotFullDomain,

    #[error("unknown family name {0:?}")]
    UnknownFamily(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
