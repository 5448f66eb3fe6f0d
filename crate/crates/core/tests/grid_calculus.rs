//! Field calculus on sampled surfaces: quadrature, Laplace-Beltrami, the
//! Gauss-Bonnet bookkeeping, Maslov periods, and the residuals that need
//! spectral derivatives.

use selfshrink_core::ambient::AmbientVector;
use selfshrink_core::error::Error;
use selfshrink_core::geom::SurfaceJet;
use selfshrink_core::grid::{self, Immersion, PeriodicGrid, SampledSurface};
use selfshrink_core::tol::Tolerances;
use selfshrink_core::tori::{clifford_torus, LawsonTorus, LeeWangTorus};
use std::f64::consts::PI;

fn tols() -> Tolerances {
    Tolerances::default()
}

fn clifford_surface(n: usize) -> SampledSurface {
    let t = clifford_torus();
    let (tu, tv) = t.periods();
    grid::sample(&t, &PeriodicGrid::new(n, n, tu, tv).unwrap(), &tols()).unwrap()
}

fn lee_wang_surface(m: u32, n: u32, nu: usize, nv: usize) -> SampledSurface {
    let t = LeeWangTorus::new(m, n).unwrap();
    let (tu, tv) = t.periods();
    grid::sample(&t, &PeriodicGrid::new(nu, nv, tu, tv).unwrap(), &tols()).unwrap()
}

#[test]
fn spectral_jets_from_positions_match_symbolic() {
    // Tabulated positions alone reproduce the closed-form jets.
    let t = clifford_torus();
    let (tu, tv) = t.periods();
    let grid = PeriodicGrid::new(64, 64, tu, tv).unwrap();
    let positions: Vec<AmbientVector> = {
        let mut p = Vec::new();
        for a in 0..grid.nu {
            for b in 0..grid.nv {
                p.push(t.jet(grid.u(a), grid.v(b)).phi);
            }
        }
        p
    };
    let surface = SampledSurface::from_positions(grid, &positions, &tols()).unwrap();
    let mut worst: f64 = 0.0;
    for (jet, i) in surface.jets.iter().zip(0..) {
        let exact = t.jet(grid.u(i / grid.nv), grid.v(i % grid.nv));
        for (got, want) in [
            (jet.phi_u, exact.phi_u),
            (jet.phi_v, exact.phi_v),
            (jet.phi_uu, exact.phi_uu),
            (jet.phi_uv, exact.phi_uv),
            (jet.phi_vv, exact.phi_vv),
        ] {
            worst = worst.max((got - want).norm());
        }
    }
    assert!(worst < 1e-10, "max derivative error {worst}");
}

#[test]
fn sampling_a_constant_map_is_degenerate() {
    struct Constant;
    impl Immersion for Constant {
        fn periods(&self) -> (f64, f64) {
            (2.0 * PI, 2.0 * PI)
        }
        fn jet(&self, u: f64, v: f64) -> SurfaceJet {
            SurfaceJet {
                u,
                v,
                phi: AmbientVector::new(1.0, 0.0, 0.0, 0.0),
                phi_u: AmbientVector::ZERO,
                phi_v: AmbientVector::ZERO,
                phi_uu: AmbientVector::ZERO,
                phi_uv: AmbientVector::ZERO,
                phi_vv: AmbientVector::ZERO,
            }
        }
    }
    let grid = PeriodicGrid::new(8, 8, 2.0 * PI, 2.0 * PI).unwrap();
    assert!(matches!(
        grid::sample(&Constant, &grid, &tols()),
        Err(Error::DegenerateJet { .. })
    ));
}

#[test]
fn aperiodic_declarations_are_detected() {
    // A Lee-Wang immersion with a wrong declared t-period does not close.
    struct WrongPeriod(LeeWangTorus);
    impl Immersion for WrongPeriod {
        fn periods(&self) -> (f64, f64) {
            (2.0 * PI, 2.0 * PI) // true t-period is 2 pi sqrt(2)
        }
        fn jet(&self, u: f64, v: f64) -> SurfaceJet {
            self.0.jet(u, v)
        }
    }
    let wrong = WrongPeriod(LeeWangTorus::new(1, 2).unwrap());
    let grid = PeriodicGrid::new(16, 16, 2.0 * PI, 2.0 * PI).unwrap();
    assert!(matches!(
        grid::sample(&wrong, &grid, &tols()),
        Err(Error::AperiodicInput { .. })
    ));
}

#[test]
fn lee_wang_periodic_closure_is_exact() {
    let t = LeeWangTorus::new(1, 2).unwrap();
    assert!(t.closure_mismatch() < 1e-12);
}

#[test]
fn integrate_clifford_area_and_willmore() {
    let surface = clifford_surface(64);
    let ones = vec![1.0; surface.jets.len()];
    let area = grid::integrate(&ones, &surface).unwrap();
    assert!((area - 8.0 * PI * PI).abs() < 1e-10 * area);

    let (willmore, area2, ratio) = grid::willmore_check(&surface).unwrap();
    assert!((willmore - 16.0 * PI * PI).abs() < 1e-10 * willmore);
    assert!((area2 - area).abs() < 1e-12);
    assert!((ratio - 2.0).abs() < 1e-12);

    let zero = vec![0.0; surface.jets.len()];
    assert_eq!(grid::integrate(&zero, &surface).unwrap(), 0.0);
}

#[test]
fn integrate_rejects_mismatched_fields() {
    let surface = clifford_surface(16);
    assert!(matches!(
        grid::integrate(&[1.0; 7], &surface),
        Err(Error::GridMismatch { .. })
    ));
}

#[test]
fn quadrature_converges_spectrally_under_refinement() {
    // Doubling the default resolution changes analytic integrals below 1e-10.
    let coarse = lee_wang_surface(1, 2, 128, 128);
    let fine = lee_wang_surface(1, 2, 256, 256);
    let area_c = grid::integrate(&vec![1.0; coarse.jets.len()], &coarse).unwrap();
    let area_f = grid::integrate(&vec![1.0; fine.jets.len()], &fine).unwrap();
    assert!((area_c - area_f).abs() < 1e-10 * area_f.abs());
    let (w_c, _, _) = grid::willmore_check(&coarse).unwrap();
    let (w_f, _, _) = grid::willmore_check(&fine).unwrap();
    assert!((w_c - w_f).abs() < 1e-10 * w_f.abs());
}

#[test]
fn laplace_beltrami_of_constants_and_closed_surfaces() {
    let surface = lee_wang_surface(1, 2, 64, 64);
    let n = surface.jets.len();

    let constant = vec![3.25; n];
    let lap = grid::laplace_beltrami(&constant, &surface).unwrap();
    assert!(lap.iter().all(|x| x.abs() < 1e-12));

    // Divergence theorem: the Laplacian of any smooth field integrates to 0.
    let field = surface.field(|j, _| (j.u.sin() + (2.0 * j.v / 2.0f64.sqrt()).cos()).exp());
    let lap = grid::laplace_beltrami(&field, &surface).unwrap();
    let total = grid::integrate(&lap, &surface).unwrap();
    assert!(total.abs() < 1e-8, "integral of Laplacian = {total}");
}

#[test]
fn laplacian_identity_on_clifford_and_lee_wang() {
    // |phi|^2 is constant on the Clifford torus and both sides vanish.
    let surface = clifford_surface(32);
    assert!(grid::laplacian_identity_residual(&surface).unwrap() < 1e-11);

    // On the (1,2) member the identity balances two nonconstant sides.
    let surface = lee_wang_surface(1, 2, 128, 128);
    assert!(grid::laplacian_identity_residual(&surface).unwrap() < 1e-6);
}

#[test]
fn gauss_bonnet_on_tori() {
    let surface = clifford_surface(64);
    let (total, genus, residual) = grid::gauss_bonnet(&surface, &tols()).unwrap();
    assert!(total.abs() < 1e-10);
    assert_eq!(genus, 1);
    assert!(residual < 1e-10);

    let lawson = {
        let t = LawsonTorus::new(2, 1).unwrap();
        let (tu, tv) = t.periods();
        grid::sample(&t, &PeriodicGrid::new(128, 128, tu, tv).unwrap(), &tols()).unwrap()
    };
    let (_, genus, residual) = grid::gauss_bonnet(&lawson, &tols()).unwrap();
    assert_eq!(genus, 1);
    assert!(residual < 1e-5, "formula residual {residual}");

    // integral of |sigma|^2 equals twice the area when the genus is one.
    let lw = lee_wang_surface(1, 2, 128, 128);
    let sigma2 = lw.field(|_, d| d.sigma2);
    let total_sigma2 = grid::integrate(&sigma2, &lw).unwrap();
    let area = grid::integrate(&vec![1.0; lw.jets.len()], &lw).unwrap();
    assert!((total_sigma2 - 2.0 * area).abs() < 1e-5);
}

#[test]
fn maslov_periods_of_clifford_and_base_independence() {
    let surface = clifford_surface(64);
    let (pu, pv) = grid::maslov_periods(&surface, &tols()).unwrap();
    assert!(pu.abs() < 1e-11, "pu = {pu}");
    assert!((pv + 4.0 * PI).abs() < 1e-11, "pv = {pv}");

    // Closedness of the Maslov form: any base line gives the same periods.
    let surface = lee_wang_surface(1, 2, 64, 64);
    let (pu0, pv0) = grid::maslov_periods(&surface, &tols()).unwrap();
    for (b, a) in [(7, 3), (31, 17), (50, 60)] {
        let (pu, pv) = grid::maslov_periods_at(&surface, b, a, &tols()).unwrap();
        assert!((pu - pu0).abs() < 1e-8);
        assert!((pv - pv0).abs() < 1e-8);
    }
}

#[test]
fn maslov_rejects_non_lagrangian_surfaces() {
    let t = LawsonTorus::new(2, 1).unwrap();
    let (tu, tv) = t.periods();
    let surface = grid::sample(&t, &PeriodicGrid::new(32, 32, tu, tv).unwrap(), &tols()).unwrap();
    assert!(matches!(
        grid::maslov_periods(&surface, &tols()),
        Err(Error::NonLagrangian { .. })
    ));
    assert!(matches!(grid::div_jh(&surface, &tols()), Err(Error::NonLagrangian { .. })));
}

#[test]
fn brioschi_curvature_matches_gauss_equation() {
    // Intrinsic route (metric only) against the extrinsic route
    // 2K = |H|^2 - |sigma|^2, on a curved member of each closed form family.
    for surface in [
        lee_wang_surface(1, 2, 128, 128),
        {
            let t = LawsonTorus::new(2, 1).unwrap();
            let (tu, tv) = t.periods();
            grid::sample(&t, &PeriodicGrid::new(128, 128, tu, tv).unwrap(), &tols()).unwrap()
        },
    ] {
        let intrinsic = grid::brioschi_gauss(&surface).unwrap();
        let mut worst: f64 = 0.0;
        for (k_intrinsic, fd) in intrinsic.iter().zip(&surface.fund) {
            worst = worst.max((k_intrinsic - fd.gauss).abs());
        }
        assert!(worst < 1e-6, "Brioschi disagrees with Gauss equation by {worst}");
    }
}

#[test]
fn structure_residuals_vanish_on_shrinkers_and_flag_rescalings() {
    let surface = clifford_surface(32);
    let (t, n) = grid::structure_residuals(&surface).unwrap();
    assert!(t < 1e-11 && n < 1e-11, "({t}, {n})");

    // Scaling the Clifford torus to radius 2 leaves the shrinker locus; the
    // tangent identity then fails by |v|/2 = 1 in the coordinate directions.
    struct Rescaled(LeeWangTorus, f64);
    impl Immersion for Rescaled {
        fn periods(&self) -> (f64, f64) {
            self.0.periods()
        }
        fn jet(&self, u: f64, v: f64) -> SurfaceJet {
            let jet = self.0.jet(u, v);
            SurfaceJet {
                phi: jet.phi * self.1,
                phi_u: jet.phi_u * self.1,
                phi_v: jet.phi_v * self.1,
                phi_uu: jet.phi_uu * self.1,
                phi_uv: jet.phi_uv * self.1,
                phi_vv: jet.phi_vv * self.1,
                ..jet
            }
        }
    }
    let rescaled = Rescaled(clifford_torus(), 2.0 / 2.0f64.sqrt());
    let (tu, tv) = rescaled.periods();
    let surface =
        grid::sample(&rescaled, &PeriodicGrid::new(32, 32, tu, tv).unwrap(), &tols()).unwrap();
    assert!(surface.max_shrinker_residual() > 0.99);
    let (t, _) = grid::structure_residuals(&surface).unwrap();
    assert!(t > 0.1, "tangent residual {t} should expose the rescaling");
}

#[test]
fn lagrangian_angle_gradient_and_sign_convention() {
    // beta = 2v - pi/2 on the Clifford torus: d beta = (0, 2) and the
    // convention is fixed so that |H - J grad beta| vanishes.
    let surface = clifford_surface(32);
    let fields = grid::lagrangian_angle_fields(&surface, &tols()).unwrap();
    for (du, dv) in fields.dbeta_u.iter().zip(&fields.dbeta_v) {
        assert!(du.abs() < 1e-11);
        assert!((dv - 2.0).abs() < 1e-11);
    }
    assert!(fields.angle_residual < 1e-11, "angle residual {}", fields.angle_residual);

    let surface = lee_wang_surface(1, 2, 64, 64);
    let fields = grid::lagrangian_angle_fields(&surface, &tols()).unwrap();
    assert!(fields.angle_residual < 1e-8);
}

#[test]
fn lagrangian_data_assembles_per_node() {
    let surface = clifford_surface(32);
    let data = grid::lagrangian_data(&surface, &tols()).unwrap();
    assert_eq!(data.len(), surface.jets.len());
    for d in &data {
        assert!(d.dbeta[0].abs() < 1e-11);
        assert!((d.dbeta[1] - 2.0).abs() < 1e-11);
        assert!(d.div_jh.abs() < 1e-11);
        assert!(d.cubic.symmetry_defect() < 1e-10);
    }
    // The unwrapped angle is continuous along the base v-line: consecutive
    // nodes differ by 2 * dv without branch jumps.
    let grid = &surface.grid;
    let dv = grid.tv / grid.nv as f64;
    for b in 1..grid.nv {
        let step = data[grid.idx(0, b)].beta - data[grid.idx(0, b - 1)].beta;
        assert!((step - 2.0 * dv).abs() < 1e-10);
    }
}

#[test]
fn div_jh_vanishes_for_hamiltonian_stationary_members() {
    let surface = lee_wang_surface(1, 2, 64, 64);
    let div = grid::div_jh(&surface, &tols()).unwrap();
    assert!(div.max_div < 1e-10, "max |div JH| = {}", div.max_div);
    assert!(div.max_residual < 1e-10);

    // Clifford is the (1,1) member: both sides vanish identically.
    let surface = clifford_surface(32);
    let div = grid::div_jh(&surface, &tols()).unwrap();
    assert!(div.max_div < 1e-11);
    assert!(div.rhs.iter().all(|x| x.abs() < 1e-11));
}
