//! Shared test fixture: the sample zoo, built once per test binary.
//!
//! Closed-form families sample at the default 128x128. The ODE-built
//! members need more nodes along the curve direction: the equivariant
//! (1,3) member has radii in [0.21, 3.34], so its invariant fields traverse
//! a dynamic range of e^{r_max^2 - r_min^2} ~ e^11 and their Fourier tails
//! only drop below the verification tolerances around a thousand modes.

use selfshrink_core::curves::{CurveKind, ProfileCurve};
use selfshrink_core::grid::SampledSurface;
use selfshrink_core::tol::Tolerances;
use selfshrink_core::tori::{BuiltFamily, FamilyParams};
use selfshrink_core::verify::{run_suite, VerificationReport};
use std::sync::OnceLock;

pub struct Member {
    pub fam: BuiltFamily,
    pub surface: SampledSurface,
    pub report: VerificationReport,
}

pub struct Zoo {
    pub members: Vec<Member>,
}

impl Zoo {
    pub fn get(&self, label: &str) -> &Member {
        self.members
            .iter()
            .find(|m| m.fam.meta.label() == label)
            .unwrap_or_else(|| panic!("no zoo member labelled {label}"))
    }

    pub fn lagrangian_members(&self) -> impl Iterator<Item = &Member> {
        self.members.iter().filter(|m| m.fam.meta.expect_lagrangian && m.surface.full_domain)
    }
}

pub fn tols() -> Tolerances {
    Tolerances::default()
}

fn build_member(fam: BuiltFamily, nu: usize, nv: usize) -> Member {
    let tols = tols();
    let surface = fam
        .surface(nu, nv, &tols)
        .unwrap_or_else(|e| panic!("sampling {}: {e}", fam.meta.label()));
    let report = run_suite(&fam.meta, &surface, &tols);
    Member { fam, surface, report }
}

pub fn zoo() -> &'static Zoo {
    static ZOO: OnceLock<Zoo> = OnceLock::new();
    ZOO.get_or_init(|| {
        let p = |m, n, pp, q| FamilyParams {
            m,
            n,
            p: pp,
            q,
            ..Default::default()
        };
        let circle = || ProfileCurve::circle(CurveKind::AbreschLanger);
        let members = vec![
            build_member(
                BuiltFamily::build("clifford", &FamilyParams::default()).unwrap(),
                128,
                128,
            ),
            build_member(
                BuiltFamily::build("lee-wang", &p(Some(1), Some(1), None, None)).unwrap(),
                128,
                128,
            ),
            build_member(
                BuiltFamily::build("lee-wang", &p(Some(1), Some(2), None, None)).unwrap(),
                128,
                128,
            ),
            build_member(
                BuiltFamily::build(
                    "lawson",
                    &FamilyParams { alpha: Some((1, 1)), ..Default::default() },
                )
                .unwrap(),
                128,
                128,
            ),
            build_member(
                BuiltFamily::build(
                    "lawson",
                    &FamilyParams { alpha: Some((2, 1)), ..Default::default() },
                )
                .unwrap(),
                128,
                128,
            ),
            build_member(BuiltFamily::from_product_curves(circle(), circle()).unwrap(), 128, 128),
            build_member(
                BuiltFamily::build("abresch-langer", &p(None, None, Some(3), Some(5))).unwrap(),
                512,
                64,
            ),
            build_member(
                BuiltFamily::from_profile_curve(ProfileCurve::circle(CurveKind::Anciaux)).unwrap(),
                128,
                128,
            ),
            build_member(
                BuiltFamily::build("anciaux", &p(None, None, Some(1), Some(3))).unwrap(),
                1024,
                64,
            ),
            build_member(BuiltFamily::build("sphere", &FamilyParams::default()).unwrap(), 64, 64),
        ];
        Zoo { members }
    })
}
