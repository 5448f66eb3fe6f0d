//! The self-shrinking torus families of Euclidean 4-space, plus the round
//! sphere as a non-torus reference example.
//!
//! Four constructions all contain the Clifford torus
//! `sqrt(2) e^{it} (cos s, sin s)`:
//!
//! * products of two closed planar self-shrinking curves (flat, Lagrangian);
//! * equivariant tori `gamma(t) (cos s, sin s)` over a closed profile curve
//!   (Lagrangian);
//! * the doubly periodic Hamiltonian stationary family
//!   `Psi_{m,n}(s,t) = sqrt(m+n) (cos s e^{i sqrt(n/m) t}/sqrt(n),
//!   sin s e^{i sqrt(m/n) t}/sqrt(m))` (Lagrangian);
//! * the spherical family `Phi_alpha(x,y) = sqrt(2)(cos x e^{i alpha y},
//!   sin x e^{iy})`, Lagrangian only at alpha = 1.
//!
//! Each family exposes its closed-form invariants (|H|^2, |sigma|^2, K,
//! |phi|^2 where available, declared min/max bounds otherwise) so the
//! numerically computed fields can be cross-validated against them.

use crate::ambient::AmbientVector;
use crate::curves::{shoot_closed, CurveKind, CurveSample, ProfileCurve};
use crate::error::{Error, Result};
use crate::geom::SurfaceJet;
use crate::grid::{sample, Immersion, PeriodicGrid, SampledSurface};
use crate::tol::{SamplingKind, Tolerances};
use num_complex::Complex64;
use std::f64::consts::PI;

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Declared closed-form min/max of an invariant field.
#[derive(Debug, Clone, Copy)]
pub struct Bounds {
    pub lo: f64,
    pub hi: f64,
}

/// Closed-form invariant fields and bounds evaluated on a grid, used to
/// cross-validate the numerically computed fundamental data.
#[derive(Debug, Clone, Default)]
pub struct ReferenceFields {
    pub h2: Option<Vec<f64>>,
    pub sigma2: Option<Vec<f64>>,
    pub gauss: Option<Vec<f64>>,
    pub phi2: Option<Vec<f64>>,
    pub h2_bounds: Option<Bounds>,
    pub sigma2_bounds: Option<Bounds>,
    pub gauss_bounds: Option<Bounds>,
    pub phi2_bounds: Option<Bounds>,
}

// ---------------------------------------------------------------------------
// Lee-Wang tori (and the Clifford torus as the (1,1) member)
// ---------------------------------------------------------------------------

/// `Psi_{m,n}(s,t)`, Hamiltonian stationary Lagrangian; (1,1) is the
/// Clifford torus. Parameters: coprime positive integers m <= n.
pub struct LeeWangTorus {
    pub m: u32,
    pub n: u32,
    scale_1: f64, // sqrt(m+n)/sqrt(n)
    scale_2: f64, // sqrt(m+n)/sqrt(m)
    freq_1: f64,  // sqrt(n/m)
    freq_2: f64,  // sqrt(m/n)
}

impl LeeWangTorus {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if m == 0 || n == 0 || m > n || gcd(m, n) != 1 {
            return Err(Error::InadmissibleParams(format!(
                "(m, n) = ({m}, {n}) must be coprime positive integers with m <= n"
            )));
        }
        let (mf, nf) = (m as f64, n as f64);
        Ok(LeeWangTorus {
            m,
            n,
            scale_1: ((mf + nf) / nf).sqrt(),
            scale_2: ((mf + nf) / mf).sqrt(),
            freq_1: (nf / mf).sqrt(),
            freq_2: (mf / nf).sqrt(),
        })
    }

    /// Closed-form |H|^2 = (m+n) / (n cos^2 s + m sin^2 s).
    pub fn h2(&self, s: f64) -> f64 {
        let (mf, nf) = (self.m as f64, self.n as f64);
        (mf + nf) / (nf * s.cos().powi(2) + mf * s.sin().powi(2))
    }

    /// Closed-form |phi|^2 = (m+n)(m cos^2 s + n sin^2 s) / (m n).
    pub fn phi2(&self, s: f64) -> f64 {
        let (mf, nf) = (self.m as f64, self.n as f64);
        (mf + nf) / (mf * nf) * (mf * s.cos().powi(2) + nf * s.sin().powi(2))
    }

    /// Declared range of |H|^2 and |phi|^2: [(m+n)/n, (m+n)/m].
    pub fn h2_bounds(&self) -> Bounds {
        let (mf, nf) = (self.m as f64, self.n as f64);
        Bounds { lo: (mf + nf) / nf, hi: (mf + nf) / mf }
    }

    /// Declared bounds (3m^2+n^2)/(n(m+n)) <= |sigma|^2 <= (m^2+3n^2)/(m(m+n)).
    pub fn sigma2_bounds(&self) -> Bounds {
        let (mf, nf) = (self.m as f64, self.n as f64);
        Bounds {
            lo: (3.0 * mf * mf + nf * nf) / (nf * (mf + nf)),
            hi: (mf * mf + 3.0 * nf * nf) / (mf * (mf + nf)),
        }
    }

    /// Declared bounds -n(n-m)/(m(m+n)) <= K <= m(n-m)/(n(m+n)).
    pub fn gauss_bounds(&self) -> Bounds {
        let (mf, nf) = (self.m as f64, self.n as f64);
        Bounds {
            lo: -nf * (nf - mf) / (mf * (mf + nf)),
            hi: mf * (nf - mf) / (nf * (mf + nf)),
        }
    }

    pub fn reference_fields(&self, grid: &PeriodicGrid) -> ReferenceFields {
        let mut h2 = Vec::with_capacity(grid.node_count());
        let mut phi2 = Vec::with_capacity(grid.node_count());
        for a in 0..grid.nu {
            let s = grid.u(a);
            let (h, p) = (self.h2(s), self.phi2(s));
            for _ in 0..grid.nv {
                h2.push(h);
                phi2.push(p);
            }
        }
        ReferenceFields {
            h2: Some(h2),
            phi2: Some(phi2),
            h2_bounds: Some(self.h2_bounds()),
            phi2_bounds: Some(self.h2_bounds()),
            sigma2_bounds: Some(self.sigma2_bounds()),
            gauss_bounds: Some(self.gauss_bounds()),
            ..Default::default()
        }
    }
}

impl Immersion for LeeWangTorus {
    fn periods(&self) -> (f64, f64) {
        (2.0 * PI, 2.0 * PI * ((self.m * self.n) as f64).sqrt())
    }

    fn jet(&self, u: f64, v: f64) -> SurfaceJet {
        let (sin_s, cos_s) = u.sin_cos();
        let e1 = Complex64::from_polar(1.0, self.freq_1 * v);
        let e2 = Complex64::from_polar(1.0, self.freq_2 * v);
        let z1 = self.scale_1 * cos_s * e1;
        let z2 = self.scale_2 * sin_s * e2;
        let i = Complex64::i();
        let phi = AmbientVector::from_complex(z1, z2);
        SurfaceJet {
            u,
            v,
            phi,
            phi_u: AmbientVector::from_complex(-self.scale_1 * sin_s * e1, self.scale_2 * cos_s * e2),
            phi_v: AmbientVector::from_complex(i * self.freq_1 * z1, i * self.freq_2 * z2),
            phi_uu: -phi,
            phi_uv: AmbientVector::from_complex(
                -i * self.freq_1 * self.scale_1 * sin_s * e1,
                i * self.freq_2 * self.scale_2 * cos_s * e2,
            ),
            phi_vv: AmbientVector::from_complex(
                -self.freq_1 * self.freq_1 * z1,
                -self.freq_2 * self.freq_2 * z2,
            ),
        }
    }
}

/// The Clifford torus as the (1,1) member of the doubly periodic family.
pub fn clifford_torus() -> LeeWangTorus {
    LeeWangTorus::new(1, 1).expect("(1,1) is admissible")
}

// ---------------------------------------------------------------------------
// Lawson tori
// ---------------------------------------------------------------------------

/// `Phi_alpha(x,y)`, spherical (|phi|^2 = 2, |H|^2 = 2); Lagrangian and
/// Clifford exactly at alpha = 1. Parameter: alpha = a/b >= 1 in lowest terms.
pub struct LawsonTorus {
    pub a: u32,
    pub b: u32,
    alpha: f64,
}

impl LawsonTorus {
    pub fn new(a: u32, b: u32) -> Result<Self> {
        if a == 0 || b == 0 || gcd(a, b) != 1 || a < b {
            return Err(Error::InadmissibleParams(format!(
                "alpha = {a}/{b} must be a rational >= 1 in lowest terms"
            )));
        }
        Ok(LawsonTorus { a, b, alpha: a as f64 / b as f64 })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Closed-form |sigma|^2 = 1 + alpha^2 / (alpha^2 cos^2 x + sin^2 x)^2.
    pub fn sigma2(&self, x: f64) -> f64 {
        let a2 = self.alpha * self.alpha;
        let den = a2 * x.cos().powi(2) + x.sin().powi(2);
        1.0 + a2 / (den * den)
    }

    /// Range of the closed form: [1 + 1/alpha^2, 1 + alpha^2].
    pub fn sigma2_bounds(&self) -> Bounds {
        let a2 = self.alpha * self.alpha;
        Bounds { lo: 1.0 + 1.0 / a2, hi: 1.0 + a2 }
    }

    /// Range taken by the Gauss curvature. Via the Gauss equation with
    /// |H|^2 = 2, this is [(1-alpha^2)/2, (1-1/alpha^2)/2].
    pub fn gauss_bounds(&self) -> Bounds {
        let a2 = self.alpha * self.alpha;
        Bounds { lo: 0.5 * (1.0 - a2), hi: 0.5 * (1.0 - 1.0 / a2) }
    }

    /// Conservative outer bounds 1 - alpha^2 <= K <= 1 - 1/alpha^2; twice as
    /// wide as the range the curvature actually attains.
    pub fn gauss_bounds_conservative(&self) -> Bounds {
        let a2 = self.alpha * self.alpha;
        Bounds { lo: 1.0 - a2, hi: 1.0 - 1.0 / a2 }
    }

    pub fn reference_fields(&self, grid: &PeriodicGrid) -> ReferenceFields {
        let n = grid.node_count();
        let mut sigma2 = Vec::with_capacity(n);
        for a in 0..grid.nu {
            let s = self.sigma2(grid.u(a));
            for _ in 0..grid.nv {
                sigma2.push(s);
            }
        }
        ReferenceFields {
            sigma2: Some(sigma2),
            h2: Some(vec![2.0; n]),
            phi2: Some(vec![2.0; n]),
            sigma2_bounds: Some(self.sigma2_bounds()),
            gauss_bounds: Some(self.gauss_bounds()),
            h2_bounds: Some(Bounds { lo: 2.0, hi: 2.0 }),
            phi2_bounds: Some(Bounds { lo: 2.0, hi: 2.0 }),
            ..Default::default()
        }
    }
}

impl Immersion for LawsonTorus {
    fn periods(&self) -> (f64, f64) {
        (2.0 * PI, 2.0 * PI * self.b as f64)
    }

    fn jet(&self, u: f64, v: f64) -> SurfaceJet {
        let r = 2.0f64.sqrt();
        let (sin_x, cos_x) = u.sin_cos();
        let e1 = Complex64::from_polar(1.0, self.alpha * v);
        let e2 = Complex64::from_polar(1.0, v);
        let z1 = r * cos_x * e1;
        let z2 = r * sin_x * e2;
        let i = Complex64::i();
        let phi = AmbientVector::from_complex(z1, z2);
        SurfaceJet {
            u,
            v,
            phi,
            phi_u: AmbientVector::from_complex(-r * sin_x * e1, r * cos_x * e2),
            phi_v: AmbientVector::from_complex(i * self.alpha * z1, i * z2),
            phi_uu: -phi,
            phi_uv: AmbientVector::from_complex(-i * self.alpha * r * sin_x * e1, i * r * cos_x * e2),
            phi_vv: AmbientVector::from_complex(-self.alpha * self.alpha * z1, -z2),
        }
    }
}

// ---------------------------------------------------------------------------
// Product tori (two planar profile curves)
// ---------------------------------------------------------------------------

/// `(Gamma_1(t), Gamma_2(s))` into the two complex coordinates: flat,
/// Lagrangian, with |sigma|^2 = |H|^2 = kappa_1^2 + kappa_2^2.
pub struct ProductTorus {
    pub curve_1: ProfileCurve,
    pub curve_2: ProfileCurve,
}

impl ProductTorus {
    pub fn new(curve_1: ProfileCurve, curve_2: ProfileCurve) -> Result<Self> {
        for (i, c) in [(1, &curve_1), (2, &curve_2)] {
            if c.kind != CurveKind::AbreschLanger {
                return Err(Error::InadmissibleParams(format!(
                    "product factor {i} must follow the product curve law"
                )));
            }
            if c.closure_error > 1e-6 {
                return Err(Error::InadmissibleParams(format!(
                    "product factor {i} is not closed: closure error {:.3e}",
                    c.closure_error
                )));
            }
        }
        Ok(ProductTorus { curve_1, curve_2 })
    }

    pub fn is_clifford(&self) -> bool {
        self.curve_1.is_circle() && self.curve_2.is_circle()
    }

    fn jet_from_samples(c1: &CurveSample, c2: &CurveSample, u: f64, v: f64) -> SurfaceJet {
        SurfaceJet {
            u,
            v,
            phi: AmbientVector::new(c1.x, c1.y, c2.x, c2.y),
            phi_u: AmbientVector::new(c1.tx, c1.ty, 0.0, 0.0),
            phi_v: AmbientVector::new(0.0, 0.0, c2.tx, c2.ty),
            // Gamma'' = kappa i Gamma'
            phi_uu: AmbientVector::new(-c1.kappa * c1.ty, c1.kappa * c1.tx, 0.0, 0.0),
            phi_uv: AmbientVector::ZERO,
            phi_vv: AmbientVector::new(0.0, 0.0, -c2.kappa * c2.ty, c2.kappa * c2.tx),
        }
    }

    /// |sigma|^2 = |H|^2 = rho_1^2 e^{r_1^2} + rho_2^2 e^{r_2^2}.
    pub fn h2_from_radii(&self, r1: f64, r2: f64) -> f64 {
        let k1 = self.curve_1.kind.closed_form_kappa(self.curve_1.constant, r1);
        let k2 = self.curve_2.kind.closed_form_kappa(self.curve_2.constant, r2);
        k1 * k1 + k2 * k2
    }

    #[allow(clippy::needless_range_loop)]
    pub fn reference_fields(&self, grid: &PeriodicGrid) -> Result<ReferenceFields> {
        let s1 = self.curve_1.resample_periodic(grid.nu)?;
        let s2 = self.curve_2.resample_periodic(grid.nv)?;
        let mut h2 = Vec::with_capacity(grid.node_count());
        for a in 0..grid.nu {
            for b in 0..grid.nv {
                h2.push(self.h2_from_radii(s1[a].r, s2[b].r));
            }
        }
        Ok(ReferenceFields {
            sigma2: Some(h2.clone()),
            h2: Some(h2),
            gauss: Some(vec![0.0; grid.node_count()]),
            ..Default::default()
        })
    }
}

impl Immersion for ProductTorus {
    fn periods(&self) -> (f64, f64) {
        (self.curve_1.period, self.curve_2.period)
    }

    fn jet(&self, u: f64, v: f64) -> SurfaceJet {
        let c1 = self.curve_1.state_at(u).expect("curve state");
        let c2 = self.curve_2.state_at(v).expect("curve state");
        Self::jet_from_samples(&c1, &c2, u, v)
    }

    #[allow(clippy::needless_range_loop)]
    fn jets_on(&self, grid: &PeriodicGrid) -> Result<Vec<SurfaceJet>> {
        let s1 = self.curve_1.resample_periodic(grid.nu)?;
        let s2 = self.curve_2.resample_periodic(grid.nv)?;
        let mut jets = Vec::with_capacity(grid.node_count());
        for a in 0..grid.nu {
            for b in 0..grid.nv {
                jets.push(Self::jet_from_samples(&s1[a], &s2[b], grid.u(a), grid.v(b)));
            }
        }
        Ok(jets)
    }

    fn closure_mismatch(&self) -> f64 {
        self.curve_1.closure_error + self.curve_2.closure_error
    }
}

// ---------------------------------------------------------------------------
// Equivariant tori over a profile curve
// ---------------------------------------------------------------------------

/// `phi(t, s) = gamma(t) (cos s, sin s)`: Lagrangian tori with
/// |H|^2 = E^2 e^{r^2} / r^2 and |sigma|^2 = E^2 e^{r^2}(r^4 - 2r^2 + 4)/r^6.
pub struct EquivariantTorus {
    pub curve: ProfileCurve,
}

impl EquivariantTorus {
    pub fn new(curve: ProfileCurve) -> Result<Self> {
        if curve.kind != CurveKind::Anciaux {
            return Err(Error::InadmissibleParams(
                "equivariant torus requires the equivariant curve law".into(),
            ));
        }
        if curve.closure_error > 1e-6 {
            return Err(Error::InadmissibleParams(format!(
                "profile curve is not closed: closure error {:.3e}",
                curve.closure_error
            )));
        }
        Ok(EquivariantTorus { curve })
    }

    pub fn is_clifford(&self) -> bool {
        self.curve.is_circle()
    }

    /// |H|^2 = E^2 e^{r^2} / r^2.
    pub fn h2_from_radius(&self, r: f64) -> f64 {
        let e2 = self.curve.constant * self.curve.constant;
        e2 * (r * r).exp() / (r * r)
    }

    /// |sigma|^2 = E^2 e^{r^2} (r^4 - 2 r^2 + 4) / r^6.
    pub fn sigma2_from_radius(&self, r: f64) -> f64 {
        let e2 = self.curve.constant * self.curve.constant;
        let r2 = r * r;
        e2 * r2.exp() * (r2 * r2 - 2.0 * r2 + 4.0) / (r2 * r2 * r2)
    }

    fn jet_from_sample(c: &CurveSample, u: f64, v: f64) -> SurfaceJet {
        let gamma = Complex64::new(c.x, c.y);
        let dgamma = Complex64::new(c.tx, c.ty);
        let ddgamma = Complex64::i() * c.kappa * dgamma;
        let (sin_s, cos_s) = v.sin_cos();
        SurfaceJet {
            u,
            v,
            phi: AmbientVector::from_complex(gamma * cos_s, gamma * sin_s),
            phi_u: AmbientVector::from_complex(dgamma * cos_s, dgamma * sin_s),
            phi_v: AmbientVector::from_complex(-gamma * sin_s, gamma * cos_s),
            phi_uu: AmbientVector::from_complex(ddgamma * cos_s, ddgamma * sin_s),
            phi_uv: AmbientVector::from_complex(-dgamma * sin_s, dgamma * cos_s),
            phi_vv: AmbientVector::from_complex(-gamma * cos_s, -gamma * sin_s),
        }
    }

    pub fn reference_fields(&self, grid: &PeriodicGrid) -> Result<ReferenceFields> {
        let s1 = self.curve.resample_periodic(grid.nu)?;
        let mut h2 = Vec::with_capacity(grid.node_count());
        let mut sigma2 = Vec::with_capacity(grid.node_count());
        for sample in s1.iter().take(grid.nu) {
            let (h, s) = (self.h2_from_radius(sample.r), self.sigma2_from_radius(sample.r));
            for _ in 0..grid.nv {
                h2.push(h);
                sigma2.push(s);
            }
        }
        Ok(ReferenceFields { h2: Some(h2), sigma2: Some(sigma2), ..Default::default() })
    }
}

impl Immersion for EquivariantTorus {
    fn periods(&self) -> (f64, f64) {
        (self.curve.period, 2.0 * PI)
    }

    fn jet(&self, u: f64, v: f64) -> SurfaceJet {
        let c = self.curve.state_at(u).expect("curve state");
        Self::jet_from_sample(&c, u, v)
    }

    #[allow(clippy::needless_range_loop)]
    fn jets_on(&self, grid: &PeriodicGrid) -> Result<Vec<SurfaceJet>> {
        let s1 = self.curve.resample_periodic(grid.nu)?;
        let mut jets = Vec::with_capacity(grid.node_count());
        for a in 0..grid.nu {
            for b in 0..grid.nv {
                jets.push(Self::jet_from_sample(&s1[a], grid.u(a), grid.v(b)));
            }
        }
        Ok(jets)
    }

    fn closure_mismatch(&self) -> f64 {
        self.curve.closure_error
    }
}

// ---------------------------------------------------------------------------
// Sphere band
// ---------------------------------------------------------------------------

/// `S^2(sqrt 2)` inside a coordinate hyperplane, in latitude-longitude
/// coordinates, evaluated only on the equatorial band |u| <= pi/3 to stay
/// clear of the poles. Not a torus and not Lagrangian; supports pointwise
/// checks only.
pub struct SphereBand;

pub const SPHERE_BAND_HALF_WIDTH: f64 = PI / 3.0;

impl SphereBand {
    pub fn jet(&self, u: f64, v: f64) -> Result<SurfaceJet> {
        if u.abs() > SPHERE_BAND_HALF_WIDTH + 1e-12 {
            return Err(Error::InadmissibleParams(format!(
                "sphere band is only evaluated for |u| <= pi/3, got u = {u}"
            )));
        }
        let r = 2.0f64.sqrt();
        let (su, cu) = u.sin_cos();
        let (sv, cv) = v.sin_cos();
        let phi = AmbientVector::new(r * cu * cv, r * cu * sv, r * su, 0.0);
        Ok(SurfaceJet {
            u,
            v,
            phi,
            phi_u: AmbientVector::new(-r * su * cv, -r * su * sv, r * cu, 0.0),
            phi_v: AmbientVector::new(-r * cu * sv, r * cu * cv, 0.0, 0.0),
            phi_uu: -phi,
            phi_uv: AmbientVector::new(r * su * sv, -r * su * cv, 0.0, 0.0),
            phi_vv: AmbientVector::new(-r * cu * cv, -r * cu * sv, 0.0, 0.0),
        })
    }

    /// Sample the band: u runs over [-pi/3, pi/3] inclusive, v over a full
    /// period. The result is marked as band-only.
    pub fn surface(&self, nu: usize, nv: usize, tols: &Tolerances) -> Result<SampledSurface> {
        let grid = PeriodicGrid::new(nu, nv, 2.0 * SPHERE_BAND_HALF_WIDTH, 2.0 * PI)?;
        let mut jets = Vec::with_capacity(grid.node_count());
        for a in 0..grid.nu {
            let u = -SPHERE_BAND_HALF_WIDTH
                + a as f64 * (2.0 * SPHERE_BAND_HALF_WIDTH) / (grid.nu - 1) as f64;
            for b in 0..grid.nv {
                jets.push(self.jet(u, grid.v(b))?);
            }
        }
        SampledSurface::from_jets(grid, jets, false, tols)
    }

    pub fn reference_fields(&self, grid: &PeriodicGrid) -> ReferenceFields {
        let n = grid.node_count();
        ReferenceFields {
            h2: Some(vec![2.0; n]),
            sigma2: Some(vec![1.0; n]),
            gauss: Some(vec![0.5; n]),
            phi2: Some(vec![2.0; n]),
            ..Default::default()
        }
    }
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

/// Family names addressable from the command line.
pub const FAMILY_NAMES: [&str; 6] =
    ["clifford", "abresch-langer", "anciaux", "lee-wang", "lawson", "sphere"];

/// A parameter value as it appears in reports.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Int(u32),
    Str(String),
}

/// Identity and provenance of a built family member.
#[derive(Debug, Clone)]
pub struct FamilyMeta {
    /// Registry name.
    pub family: String,
    /// Parameters in report order.
    pub params: Vec<(String, ParamValue)>,
    pub kind: SamplingKind,
    /// Ground truth: is this member congruent to the Clifford torus?
    pub is_clifford: bool,
    /// Is the family Lagrangian at these parameters?
    pub expect_lagrangian: bool,
}

impl FamilyMeta {
    /// Single-token label, safe as the first CSV column (no commas).
    pub fn label(&self) -> String {
        if self.params.is_empty() {
            return self.family.clone();
        }
        let parts: Vec<String> = self
            .params
            .iter()
            .map(|(_, v)| match v {
                ParamValue::Int(i) => i.to_string(),
                ParamValue::Str(s) => s.clone(),
            })
            .collect();
        format!("{}({})", self.family, parts.join("/"))
    }
}

/// One concrete, buildable member of the zoo.
pub enum FamilyImmersion {
    LeeWang(LeeWangTorus),
    Lawson(LawsonTorus),
    Product(ProductTorus),
    Equivariant(EquivariantTorus),
    Sphere(SphereBand),
}

pub struct BuiltFamily {
    pub meta: FamilyMeta,
    pub imm: FamilyImmersion,
}

/// Optional numeric parameters collected from a caller (the CLI flag set).
#[derive(Debug, Clone, Copy, Default)]
pub struct FamilyParams {
    pub m: Option<u32>,
    pub n: Option<u32>,
    pub p: Option<u32>,
    pub q: Option<u32>,
    /// alpha as a reduced fraction (a, b).
    pub alpha: Option<(u32, u32)>,
}

impl BuiltFamily {
    /// Build a family member from its registry name and parameters. The
    /// product family takes (p, q) for its first factor; the second factor
    /// is the unit circle.
    pub fn build(name: &str, params: &FamilyParams) -> Result<BuiltFamily> {
        match name {
            "clifford" => Ok(BuiltFamily {
                meta: FamilyMeta {
                    family: "clifford".into(),
                    params: vec![],
                    kind: SamplingKind::Analytic,
                    is_clifford: true,
                    expect_lagrangian: true,
                },
                imm: FamilyImmersion::LeeWang(clifford_torus()),
            }),
            "lee-wang" => {
                let (m, n) = match (params.m, params.n) {
                    (Some(m), Some(n)) => (m, n),
                    _ => {
                        return Err(Error::InadmissibleParams(
                            "lee-wang requires --m and --n".into(),
                        ))
                    }
                };
                let torus = LeeWangTorus::new(m, n)?;
                Ok(BuiltFamily {
                    meta: FamilyMeta {
                        family: "lee-wang".into(),
                        params: vec![
                            ("m".into(), ParamValue::Int(m)),
                            ("n".into(), ParamValue::Int(n)),
                        ],
                        kind: SamplingKind::Analytic,
                        is_clifford: m == 1 && n == 1,
                        expect_lagrangian: true,
                    },
                    imm: FamilyImmersion::LeeWang(torus),
                })
            }
            "lawson" => {
                let (a, b) = params.alpha.ok_or_else(|| {
                    Error::InadmissibleParams("lawson requires --alpha a/b".into())
                })?;
                let torus = LawsonTorus::new(a, b)?;
                Ok(BuiltFamily {
                    meta: FamilyMeta {
                        family: "lawson".into(),
                        params: vec![(
                            "alpha".into(),
                            ParamValue::Str(format!("{a}/{b}")),
                        )],
                        kind: SamplingKind::Analytic,
                        is_clifford: a == 1 && b == 1,
                        expect_lagrangian: a == 1 && b == 1,
                    },
                    imm: FamilyImmersion::Lawson(torus),
                })
            }
            "abresch-langer" => {
                let (p, q) = match (params.p, params.q) {
                    (Some(p), Some(q)) => (p, q),
                    _ => {
                        return Err(Error::InadmissibleParams(
                            "abresch-langer requires --p and --q".into(),
                        ))
                    }
                };
                let (_, curve) = shoot_closed(CurveKind::AbreschLanger, p, q)?;
                let torus = ProductTorus::new(curve, ProfileCurve::circle(CurveKind::AbreschLanger))?;
                Ok(BuiltFamily {
                    meta: FamilyMeta {
                        family: "abresch-langer".into(),
                        params: vec![
                            ("p".into(), ParamValue::Int(p)),
                            ("q".into(), ParamValue::Int(q)),
                        ],
                        kind: SamplingKind::Ode,
                        is_clifford: false,
                        expect_lagrangian: true,
                    },
                    imm: FamilyImmersion::Product(torus),
                })
            }
            "anciaux" => {
                let (p, q) = match (params.p, params.q) {
                    (Some(p), Some(q)) => (p, q),
                    _ => {
                        return Err(Error::InadmissibleParams(
                            "anciaux requires --p and --q".into(),
                        ))
                    }
                };
                let (_, curve) = shoot_closed(CurveKind::Anciaux, p, q)?;
                let torus = EquivariantTorus::new(curve)?;
                Ok(BuiltFamily {
                    meta: FamilyMeta {
                        family: "anciaux".into(),
                        params: vec![
                            ("p".into(), ParamValue::Int(p)),
                            ("q".into(), ParamValue::Int(q)),
                        ],
                        kind: SamplingKind::Ode,
                        is_clifford: false,
                        expect_lagrangian: true,
                    },
                    imm: FamilyImmersion::Equivariant(torus),
                })
            }
            "sphere" => Ok(BuiltFamily {
                meta: FamilyMeta {
                    family: "sphere".into(),
                    params: vec![],
                    kind: SamplingKind::Analytic,
                    is_clifford: false,
                    expect_lagrangian: false,
                },
                imm: FamilyImmersion::Sphere(SphereBand),
            }),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }

    /// Product of two explicit profile curves.
    pub fn from_product_curves(c1: ProfileCurve, c2: ProfileCurve) -> Result<BuiltFamily> {
        let torus = ProductTorus::new(c1, c2)?;
        let describe = |c: &ProfileCurve| -> String {
            if c.is_circle() {
                "circle".to_string()
            } else {
                format!("rot {:.3}", c.rotation.unwrap_or(f64::NAN))
            }
        };
        let is_clifford = torus.is_clifford();
        let label = format!("{} x {}", describe(&torus.curve_1), describe(&torus.curve_2));
        Ok(BuiltFamily {
            meta: FamilyMeta {
                family: "abresch-langer".into(),
                params: vec![("curves".into(), ParamValue::Str(label))],
                kind: if torus.curve_1.is_circle() && torus.curve_2.is_circle() {
                    SamplingKind::Analytic
                } else {
                    SamplingKind::Ode
                },
                is_clifford,
                expect_lagrangian: true,
            },
            imm: FamilyImmersion::Product(torus),
        })
    }

    /// Equivariant torus over an explicit profile curve.
    pub fn from_profile_curve(curve: ProfileCurve) -> Result<BuiltFamily> {
        let torus = EquivariantTorus::new(curve)?;
        let is_clifford = torus.is_clifford();
        let kind = if torus.curve.is_circle() { SamplingKind::Analytic } else { SamplingKind::Ode };
        let label = if is_clifford { "circle" } else { "shot" };
        Ok(BuiltFamily {
            meta: FamilyMeta {
                family: "anciaux".into(),
                params: vec![("curves".into(), ParamValue::Str(label.into()))],
                kind,
                is_clifford,
                expect_lagrangian: true,
            },
            imm: FamilyImmersion::Equivariant(torus),
        })
    }

    pub fn periods(&self) -> Option<(f64, f64)> {
        match &self.imm {
            FamilyImmersion::LeeWang(t) => Some(t.periods()),
            FamilyImmersion::Lawson(t) => Some(t.periods()),
            FamilyImmersion::Product(t) => Some(t.periods()),
            FamilyImmersion::Equivariant(t) => Some(t.periods()),
            FamilyImmersion::Sphere(_) => None,
        }
    }

    /// Sample on an nu x nv grid over the family's fundamental domain.
    pub fn surface(&self, nu: usize, nv: usize, tols: &Tolerances) -> Result<SampledSurface> {
        match &self.imm {
            FamilyImmersion::LeeWang(t) => {
                let (tu, tv) = t.periods();
                sample(t, &PeriodicGrid::new(nu, nv, tu, tv)?, tols)
            }
            FamilyImmersion::Lawson(t) => {
                let (tu, tv) = t.periods();
                sample(t, &PeriodicGrid::new(nu, nv, tu, tv)?, tols)
            }
            FamilyImmersion::Product(t) => {
                let (tu, tv) = t.periods();
                sample(t, &PeriodicGrid::new(nu, nv, tu, tv)?, tols)
            }
            FamilyImmersion::Equivariant(t) => {
                let (tu, tv) = t.periods();
                sample(t, &PeriodicGrid::new(nu, nv, tu, tv)?, tols)
            }
            FamilyImmersion::Sphere(s) => s.surface(nu, nv, tols),
        }
    }

    /// Closed-form reference fields on the given grid.
    pub fn reference_fields(&self, grid: &PeriodicGrid) -> Result<ReferenceFields> {
        match &self.imm {
            FamilyImmersion::LeeWang(t) => Ok(t.reference_fields(grid)),
            FamilyImmersion::Lawson(t) => Ok(t.reference_fields(grid)),
            FamilyImmersion::Product(t) => t.reference_fields(grid),
            FamilyImmersion::Equivariant(t) => t.reference_fields(grid),
            FamilyImmersion::Sphere(s) => Ok(s.reference_fields(grid)),
        }
    }
}
