//! CSV renderings of reports and surface dumps. Numeric fields use the same
//! 17-significant-digit format as the JSON report; absent values print as
//! nan; only the family column is non-numeric.

use selfshrink_core::grid::SampledSurface;
use selfshrink_core::verify::VerificationReport;

pub const REPORT_HEADER: &str = "family,shrinker,symplectic,laplacian,structure_tangent,\
structure_normal,div_jh,cubic_symmetry,h2_min,h2_max,sigma2_min,sigma2_max,k_min,k_max,\
phi2_min,phi2_max,area,willmore,total_curvature,gb_residual,genus,maslov_u,maslov_v,consistent";

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    match x {
        Some(v) => num(v),
        None => "nan".into(),
    }
}

pub fn report_row(report: &VerificationReport) -> String {
    let r = &report.residuals;
    let g = &report.ranges;
    let i = &report.integrals;
    let (mu, mv) = match report.maslov {
        Some((u, v)) => (Some(u), Some(v)),
        None => (None, None),
    };
    let genus = match report.genus {
        Some(g) => g.to_string(),
        None => "nan".into(),
    };
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        report.meta.label(),
        num(r.shrinker),
        num(r.symplectic),
        opt(r.laplacian),
        opt(r.structure_tangent),
        opt(r.structure_normal),
        opt(r.div_jh),
        opt(r.cubic_symmetry),
        num(g.h2.min),
        num(g.h2.max),
        num(g.sigma2.min),
        num(g.sigma2.max),
        num(g.gauss.min),
        num(g.gauss.max),
        num(g.phi2.min),
        num(g.phi2.max),
        opt(i.area),
        opt(i.willmore),
        opt(i.total_curvature),
        opt(i.gb_residual),
        genus,
        opt(mu),
        opt(mv),
        u8::from(report.consistent),
    )
}

/// Surface grid dump: one row per node, header `u,v,x1,y1,x2,y2`.
pub fn surface_csv(surface: &SampledSurface) -> String {
    let mut out = String::with_capacity(surface.jets.len() * 120);
    out.push_str("u,v,x1,y1,x2,y2\n");
    for jet in &surface.jets {
        let p = jet.phi.0;
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            num(jet.u),
            num(jet.v),
            num(p[0]),
            num(p[1]),
            num(p[2]),
            num(p[3])
        ));
    }
    out
}
