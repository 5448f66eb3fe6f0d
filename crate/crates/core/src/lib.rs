//! Numerical differential geometry of self-shrinking surfaces in R^4.
//!
//! The crate builds the known families of self-shrinking tori for mean
//! curvature flow in Euclidean 4-space (products of planar profile curves,
//! equivariant tori over a profile curve, and two doubly periodic
//! closed-form families), then verifies from the immersion alone the
//! identities, integrals, bounds, and rigidity hypotheses those surfaces
//! must satisfy: the self-shrinker equation `H = -phi^perp`, the Willmore
//! and Gauss-Bonnet integral identities, Lagrangian structure (angle, cubic
//! form, Maslov periods), and the hypotheses of the known Clifford-torus
//! rigidity statements.

pub mod ambient;
pub mod curves;
pub mod error;
pub mod geom;
pub mod grid;
pub mod rk;
pub mod spectral;
pub mod tol;
pub mod tori;
pub mod verify;

pub use ambient::AmbientVector;
pub use error::{Error, Result};
pub use geom::{FundamentalData, SurfaceJet};
pub use grid::{Immersion, PeriodicGrid, SampledSurface};
pub use tol::{SamplingKind, Tolerances};
