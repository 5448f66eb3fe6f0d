//! Default numerical tolerances.
//!
//! "Zero" residual thresholds are 1e-8 for families sampled from closed-form
//! expressions on spectral grids and 1e-6 for families built by ODE
//! integration. Everything is overridable through [`Tolerances`].

/// Thresholds used by verification and by precondition checks.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Residual threshold for closed-form (spectral-grid) families.
    pub residual_analytic: f64,
    /// Residual threshold for ODE-sampled families.
    pub residual_ode: f64,
    /// |omega(phi_u, phi_v)| below this means the tangent plane is Lagrangian.
    pub lagrangian: f64,
    /// | |phi|^2 - 2 | below this means the point lies on S^3(sqrt 2).
    pub spherical: f64,
    /// Gram determinant below `degenerate_det * scale^4` is an error.
    pub degenerate_det: f64,
    /// Periodic closure tolerance for sampled immersions.
    pub closure: f64,
    /// Allowed distance of the genus estimate from the nearest integer.
    pub genus: f64,
    /// (max - min) < constancy * max(1, max) counts as "constant".
    pub constancy: f64,
    /// Slack allowed when checking a declared inequality bound.
    pub bound_slack: f64,
    /// A Maslov period of magnitude above this counts as nontrivial.
    pub maslov: f64,
    /// Laplacian identity threshold.
    pub laplacian: f64,
    /// Structure-equation and div JH identity threshold.
    pub structure: f64,
    /// Cubic-form symmetry defect threshold.
    pub cubic_symmetry: f64,
    /// Gauss-Bonnet formula residual threshold.
    pub gauss_bonnet: f64,
    /// Willmore ratio deviation, closed-form families.
    pub willmore_analytic: f64,
    /// Willmore ratio deviation, ODE families.
    pub willmore_ode: f64,
    /// max |div JH| below this counts as Hamiltonian stationary.
    pub hamiltonian_stationary: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual_analytic: 1e-8,
            residual_ode: 1e-6,
            lagrangian: 1e-8,
            spherical: 1e-6,
            degenerate_det: 1e-12,
            closure: 1e-6,
            genus: 0.01,
            constancy: 1e-6,
            bound_slack: 1e-9,
            maslov: 1e-3,
            laplacian: 1e-5,
            structure: 1e-6,
            cubic_symmetry: 1e-10,
            gauss_bonnet: 1e-4,
            willmore_analytic: 1e-6,
            willmore_ode: 1e-5,
            hamiltonian_stationary: 1e-8,
        }
    }
}

/// How a family's jets are produced; selects the residual threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingKind {
    /// Exact closed-form jets.
    Analytic,
    /// Jets assembled from ODE states.
    Ode,
}

impl Tolerances {
    pub fn residual(&self, kind: SamplingKind) -> f64 {
        match kind {
            SamplingKind::Analytic => self.residual_analytic,
            SamplingKind::Ode => self.residual_ode,
        }
    }

    pub fn willmore(&self, kind: SamplingKind) -> f64 {
        match kind {
            SamplingKind::Analytic => self.willmore_analytic,
            SamplingKind::Ode => self.willmore_ode,
        }
    }
}
