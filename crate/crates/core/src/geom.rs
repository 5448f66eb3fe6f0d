//! Pointwise extrinsic differential geometry of immersed surfaces in R^4.
//!
//! Everything in this module is a pure function of a single 2-jet of the
//! immersion: the induced metric, the second fundamental form as the normal
//! projection of the second derivatives, the mean curvature vector
//! `H = g^{ij} sigma_ij`, and the residuals of the pointwise equations a
//! self-shrinker must satisfy. Quantities that require differentiating a
//! computed field (the structure equations, div JH, the Lagrangian angle
//! gradient) take the needed directional derivatives as explicit inputs; the
//! grid module produces those spectrally.

use crate::ambient::AmbientVector;
use crate::error::{Error, Result};

/// Position and parametric derivatives of an immersion at one parameter point.
#[derive(Debug, Clone, Copy)]
pub struct SurfaceJet {
    pub u: f64,
    pub v: f64,
    pub phi: AmbientVector,
    pub phi_u: AmbientVector,
    pub phi_v: AmbientVector,
    pub phi_uu: AmbientVector,
    pub phi_uv: AmbientVector,
    pub phi_vv: AmbientVector,
}

/// Symmetric 2x2 matrix in the coordinate basis (indices u, v).
#[derive(Debug, Clone, Copy)]
pub struct Sym2 {
    pub uu: f64,
    pub uv: f64,
    pub vv: f64,
}

impl Sym2 {
    pub fn det(&self) -> f64 {
        self.uu * self.vv - self.uv * self.uv
    }

    /// Inverse, assuming `det != 0`.
    pub fn inverse(&self) -> Sym2 {
        let d = self.det();
        Sym2 { uu: self.vv / d, uv: -self.uv / d, vv: self.uu / d }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match (i, j) {
            (0, 0) => self.uu,
            (1, 1) => self.vv,
            _ => self.uv,
        }
    }
}

/// Metric, second fundamental form, mean curvature and derived scalars at a point.
#[derive(Debug, Clone, Copy)]
pub struct FundamentalData {
    pub metric: Sym2,
    pub inv_metric: Sym2,
    /// sigma_uu, sigma_uv, sigma_vv: normal-valued second fundamental form.
    pub sigma: [AmbientVector; 3],
    /// Mean curvature vector H = g^{ij} sigma_ij.
    pub mean_curvature: AmbientVector,
    /// |sigma|^2 = g^{ik} g^{jl} <sigma_ij, sigma_kl>.
    pub sigma2: f64,
    /// |H|^2.
    pub h2: f64,
    /// Gauss curvature from 2K = |H|^2 - |sigma|^2.
    pub gauss: f64,
}

impl FundamentalData {
    pub fn sigma_at(&self, i: usize, j: usize) -> AmbientVector {
        match (i, j) {
            (0, 0) => self.sigma[0],
            (1, 1) => self.sigma[2],
            _ => self.sigma[1],
        }
    }
}

/// Fully symmetric cubic form C_ijk = <sigma_ij, J phi_k> of a Lagrangian point.
#[derive(Debug, Clone, Copy)]
pub struct CubicForm(pub [[[f64; 2]; 2]; 2]);

impl CubicForm {
    /// Largest deviation |C_ijk - C_perm(ijk)| over all index permutations.
    pub fn symmetry_defect(&self) -> f64 {
        let c = &self.0;
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let base = c[i][j][k];
                    for p in [[i, k, j], [j, i, k], [j, k, i], [k, i, j], [k, j, i]] {
                        worst = worst.max((base - c[p[0]][p[1]][p[2]]).abs());
                    }
                }
            }
        }
        worst
    }
}

/// Lagrangian quantities at a point. `beta` is reported modulo 2*pi; only its
/// gradient and period integrals carry contract weight. The sign convention is
/// fixed so that `H = J grad(beta)` holds (the residual |H - J grad beta|
/// vanishes on the Clifford torus), hence `alpha_H = <JH, .> = -d beta`.
#[derive(Debug, Clone, Copy)]
pub struct LagrangianData {
    /// Lagrangian angle: argument of the complex determinant of (phi_u, phi_v).
    pub beta: f64,
    /// Angle gradient (d beta / du, d beta / dv); filled at grid level.
    pub dbeta: [f64; 2],
    pub cubic: CubicForm,
    /// div JH; filled at grid level.
    pub div_jh: f64,
}

fn gram_threshold(metric: &Sym2, degenerate_det: f64) -> f64 {
    let scale2 = metric.uu.max(metric.vv);
    degenerate_det * scale2 * scale2
}

/// Check immersion regularity of a jet; returns the metric on success.
pub fn regularity(jet: &SurfaceJet, degenerate_det: f64) -> Result<Sym2> {
    let metric = Sym2 {
        uu: jet.phi_u.dot(&jet.phi_u),
        uv: jet.phi_u.dot(&jet.phi_v),
        vv: jet.phi_v.dot(&jet.phi_v),
    };
    let threshold = gram_threshold(&metric, degenerate_det);
    let det = metric.det();
    if det.is_nan() || det <= threshold || threshold == 0.0 {
        return Err(Error::DegenerateJet { u: jet.u, v: jet.v, det, threshold });
    }
    Ok(metric)
}

/// First and second fundamental forms, mean curvature, and derived scalars.
///
/// `sigma_ij` is the normal projection of `phi_ij`, `H = g^{ij} sigma_ij`, and
/// the Gauss curvature comes from the Gauss equation `2K = |H|^2 - |sigma|^2`.
pub fn fundamental_data(jet: &SurfaceJet, degenerate_det: f64) -> Result<FundamentalData> {
    let metric = regularity(jet, degenerate_det)?;
    let inv = metric.inverse();

    let normal_part = |w: &AmbientVector| -> AmbientVector {
        let cu = inv.uu * w.dot(&jet.phi_u) + inv.uv * w.dot(&jet.phi_v);
        let cv = inv.uv * w.dot(&jet.phi_u) + inv.vv * w.dot(&jet.phi_v);
        *w - jet.phi_u * cu - jet.phi_v * cv
    };

    let sigma = [
        normal_part(&jet.phi_uu),
        normal_part(&jet.phi_uv),
        normal_part(&jet.phi_vv),
    ];
    let mean_curvature = sigma[0] * inv.uu + sigma[1] * (2.0 * inv.uv) + sigma[2] * inv.vv;

    let mut sigma2 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let sij = if i + j == 0 { sigma[0] } else if i + j == 2 { sigma[2] } else { sigma[1] };
                    let skl = if k + l == 0 { sigma[0] } else if k + l == 2 { sigma[2] } else { sigma[1] };
                    sigma2 += inv.get(i, k) * inv.get(j, l) * sij.dot(&skl);
                }
            }
        }
    }
    let h2 = mean_curvature.norm_sq();
    let gauss = 0.5 * (h2 - sigma2);

    Ok(FundamentalData { metric, inv_metric: inv, sigma, mean_curvature, sigma2, h2, gauss })
}

/// Split an ambient vector into tangent and normal parts at a jet.
///
/// The tangent part solves the 2x2 normal equations of least squares against
/// the basis (phi_u, phi_v).
pub fn split_tangent_normal(
    v: &AmbientVector,
    jet: &SurfaceJet,
    degenerate_det: f64,
) -> Result<(AmbientVector, AmbientVector)> {
    let metric = regularity(jet, degenerate_det)?;
    let inv = metric.inverse();
    let cu = inv.uu * v.dot(&jet.phi_u) + inv.uv * v.dot(&jet.phi_v);
    let cv = inv.uv * v.dot(&jet.phi_u) + inv.vv * v.dot(&jet.phi_v);
    let tangent = jet.phi_u * cu + jet.phi_v * cv;
    Ok((tangent, *v - tangent))
}

/// Tangential coordinates of the position vector: phi^T = c^u phi_u + c^v phi_v.
pub fn position_tangent_coords(jet: &SurfaceJet, fd: &FundamentalData) -> [f64; 2] {
    let pu = jet.phi.dot(&jet.phi_u);
    let pv = jet.phi.dot(&jet.phi_v);
    [
        fd.inv_metric.uu * pu + fd.inv_metric.uv * pv,
        fd.inv_metric.uv * pu + fd.inv_metric.vv * pv,
    ]
}

/// |H + phi^perp|: zero exactly where the self-shrinker equation holds.
pub fn shrinker_residual(jet: &SurfaceJet, degenerate_det: f64) -> Result<f64> {
    let fd = fundamental_data(jet, degenerate_det)?;
    Ok(shrinker_residual_with(jet, &fd))
}

pub fn shrinker_residual_with(jet: &SurfaceJet, fd: &FundamentalData) -> f64 {
    let c = position_tangent_coords(jet, fd);
    let phi_normal = jet.phi - jet.phi_u * c[0] - jet.phi_v * c[1];
    (fd.mean_curvature + phi_normal).norm()
}

/// |omega(phi_u, phi_v)|: zero exactly where the tangent plane is Lagrangian.
pub fn symplectic_residual(jet: &SurfaceJet) -> f64 {
    jet.phi_u.omega(&jet.phi_v).abs()
}

/// Lagrangian angle (mod 2*pi) and cubic form at a Lagrangian point.
///
/// `beta` is the argument of the complex 2x2 determinant of (phi_u, phi_v);
/// for a Lagrangian plane the modulus of that determinant equals
/// `sqrt(det g)`, so the argument is well defined wherever the jet is regular.
pub fn lagrangian_pointwise(
    jet: &SurfaceJet,
    fd: &FundamentalData,
    lagrangian_tol: f64,
) -> Result<(f64, CubicForm)> {
    let residual = symplectic_residual(jet);
    if residual > lagrangian_tol {
        return Err(Error::NonLagrangian { residual, tol: lagrangian_tol });
    }
    Ok((lagrangian_angle_raw(jet), cubic_form(jet, fd)))
}

/// arg det_C(phi_u, phi_v) in (-pi, pi]; no unwrapping.
pub fn lagrangian_angle_raw(jet: &SurfaceJet) -> f64 {
    complex_determinant(jet).arg()
}

/// det_C(phi_u, phi_v) in the two complex coordinates.
pub fn complex_determinant(jet: &SurfaceJet) -> num_complex::Complex64 {
    jet.phi_u.z1() * jet.phi_v.z2() - jet.phi_u.z2() * jet.phi_v.z1()
}

/// Cubic form C_ijk = <sigma_ij, J phi_k>.
#[allow(clippy::needless_range_loop)]
pub fn cubic_form(jet: &SurfaceJet, fd: &FundamentalData) -> CubicForm {
    let basis = [jet.phi_u, jet.phi_v];
    let mut c = [[[0.0; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                c[i][j][k] = fd.sigma_at(i, j).dot(&basis[k].j());
            }
        }
    }
    CubicForm(c)
}

/// Residuals of the self-shrinker structure equations at one point.
///
/// The tangent equation is `A_H v = v - nabla_v phi^T` and the normal one is
/// `nabla^perp_v H = sigma(v, phi^T)`, checked for v in the coordinate
/// directions. `dh` and `dphit` are the ambient directional derivatives of the
/// fields `H` and `phi^T` along u and v, supplied by the caller.
pub fn structure_residuals_at(
    jet: &SurfaceJet,
    fd: &FundamentalData,
    dh: &[AmbientVector; 2],
    dphit: &[AmbientVector; 2],
) -> (f64, f64) {
    let inv = &fd.inv_metric;
    let tangent_part = |w: &AmbientVector| -> AmbientVector {
        let cu = inv.uu * w.dot(&jet.phi_u) + inv.uv * w.dot(&jet.phi_v);
        let cv = inv.uv * w.dot(&jet.phi_u) + inv.vv * w.dot(&jet.phi_v);
        jet.phi_u * cu + jet.phi_v * cv
    };
    let pos = position_tangent_coords(jet, fd);
    let basis = [jet.phi_u, jet.phi_v];

    let mut tangent_res: f64 = 0.0;
    let mut normal_res: f64 = 0.0;
    for i in 0..2 {
        // A_H v = -(D_v H)^T for the coordinate direction v = phi_i.
        let a_h = -tangent_part(&dh[i]);
        let nabla_phit = tangent_part(&dphit[i]);
        tangent_res = tangent_res.max((a_h - basis[i] + nabla_phit).norm());

        let nabla_perp_h = dh[i] - tangent_part(&dh[i]);
        let sigma_v_phit = fd.sigma_at(i, 0) * pos[0] + fd.sigma_at(i, 1) * pos[1];
        normal_res = normal_res.max((nabla_perp_h - sigma_v_phit).norm());
    }
    (tangent_res, normal_res)
}

/// Removal of the umbilic part for a point on the sphere S^3(sqrt 2):
/// `sigma_hat_ij = sigma_ij + g_ij phi / 2`. Returns (|sigma_hat|^2, defect)
/// where the defect is `| |sigma|^2 - 1 - |sigma_hat|^2 |`.
pub fn spherical_decomposition(
    jet: &SurfaceJet,
    fd: &FundamentalData,
    spherical_tol: f64,
) -> Result<(f64, f64)> {
    let phi2 = jet.phi.norm_sq();
    if (phi2 - 2.0).abs() > spherical_tol {
        return Err(Error::NonSpherical { phi2, tol: spherical_tol });
    }
    let g = &fd.metric;
    let hat = [
        fd.sigma[0] + jet.phi * (0.5 * g.uu),
        fd.sigma[1] + jet.phi * (0.5 * g.uv),
        fd.sigma[2] + jet.phi * (0.5 * g.vv),
    ];
    let inv = &fd.inv_metric;
    let mut hat2 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let hij = if i + j == 0 { hat[0] } else if i + j == 2 { hat[2] } else { hat[1] };
                    let hkl = if k + l == 0 { hat[0] } else if k + l == 2 { hat[2] } else { hat[1] };
                    hat2 += inv.get(i, k) * inv.get(j, l) * hij.dot(&hkl);
                }
            }
        }
    }
    let defect = (fd.sigma2 - 1.0 - hat2).abs();
    Ok((hat2, defect))
}
