//! Full verification suite and rigidity-hypothesis classification.
//!
//! `run_suite` evaluates every residual, invariant range, and integral the
//! surface supports, records "not applicable" markers for checks that need
//! structure the surface does not have (Lagrangian-only checks on
//! non-Lagrangian surfaces, quadrature on band-only samplings), and feeds a
//! decision ladder that checks the hypotheses of the known Clifford-torus
//! rigidity statements:
//!
//! * a compact Lagrangian self-shrinker with |H|^2 constant, or <= 2, or
//!   >= 2, is the Clifford torus;
//! * a compact orientable Lagrangian self-shrinker with |sigma|^2 <= 2 is a
//!   torus with |sigma|^2 = 2, and is Clifford if K does not change sign;
//! * a compact self-shrinker of codimension 2 with the |H|^2 hypothesis and
//!   |sigma|^2 below the gap bound (3p-4)/(2p-3) at p = 2 is Clifford.
//!
//! The classifier never claims a proof: it evaluates hypotheses numerically
//! and reports whether the implied conclusion is consistent with the known
//! identity of the sampled family member.

use crate::error::{Error, Result};
use crate::grid::{self, SampledSurface};
use crate::tol::Tolerances;
use crate::tori::{FamilyMeta, ParamValue};
use std::fmt::Write as _;

/// Gap threshold (3p - 4)/(2p - 3) for codimension p.
pub fn gap_bound(p: u32) -> Result<f64> {
    if p == 0 {
        return Err(Error::InadmissibleParams("codimension p must be >= 1".into()));
    }
    let p = p as f64;
    Ok((3.0 * p - 4.0) / (2.0 * p - 3.0))
}

/// A tolerance-aware boolean with its margin (positive when comfortably
/// true). `value: None` marks a hypothesis that was not evaluable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypothesisFlag {
    pub value: Option<bool>,
    pub margin: Option<f64>,
}

impl HypothesisFlag {
    fn of(value: bool, margin: f64) -> Self {
        HypothesisFlag { value: Some(value), margin: Some(margin) }
    }

    const NOT_APPLICABLE: HypothesisFlag = HypothesisFlag { value: None, margin: None };

    pub fn is_true(&self) -> bool {
        self.value == Some(true)
    }
}

/// Numerical verdicts on the hypotheses of the rigidity statements.
#[derive(Debug, Clone, Copy)]
pub struct HypothesisFlags {
    pub h2_constant: HypothesisFlag,
    pub h2_le_2: HypothesisFlag,
    pub h2_ge_2: HypothesisFlag,
    pub sigma2_le_2: HypothesisFlag,
    pub lagrangian: HypothesisFlag,
    /// div JH = 0 everywhere; evaluable only on Lagrangian full-domain samples.
    pub hamiltonian_stationary: HypothesisFlag,
    /// |phi|^2 = 2 everywhere.
    pub spherical: HypothesisFlag,
    pub k_nonneg: HypothesisFlag,
    pub k_nonpos: HypothesisFlag,
    /// |sigma|^2 <= gap_bound(2) everywhere.
    pub sigma2_le_gap2: HypothesisFlag,
}

/// Classifier outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conclusion {
    CliffordTorus,
    TorusSigmaTwo,
    NoRigidity,
    /// Hypotheses were evaluated on a coordinate band only; no global
    /// conclusion is drawn.
    WithheldBandOnly,
}

impl Conclusion {
    pub fn as_str(&self) -> &'static str {
        match self {
            Conclusion::CliffordTorus => "Clifford torus",
            Conclusion::TorusSigmaTwo => "torus with |sigma|^2 = 2",
            Conclusion::NoRigidity => "no rigidity applies",
            Conclusion::WithheldBandOnly => "withheld (band-only sampling)",
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Residuals {
    pub shrinker: f64,
    pub symplectic: f64,
    pub laplacian: Option<f64>,
    pub structure_tangent: Option<f64>,
    pub structure_normal: Option<f64>,
    pub div_jh: Option<f64>,
    pub cubic_symmetry: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct Ranges {
    pub h2: Range,
    pub sigma2: Range,
    pub gauss: Range,
    pub phi2: Range,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Integrals {
    pub area: Option<f64>,
    pub willmore: Option<f64>,
    pub total_curvature: Option<f64>,
    pub gb_residual: Option<f64>,
}

/// Everything `run_suite` measures on one surface.
pub struct VerificationReport {
    pub meta: FamilyMeta,
    pub grid: grid::PeriodicGrid,
    pub full_domain: bool,
    pub residuals: Residuals,
    pub ranges: Ranges,
    pub integrals: Integrals,
    pub genus: Option<i64>,
    pub maslov: Option<(f64, f64)>,
    pub flags: HypothesisFlags,
    pub conclusion: Conclusion,
    pub consistent: bool,
    /// max |div JH| (distinct from the identity residual).
    pub div_jh_max: Option<f64>,
    pub willmore_ratio: Option<f64>,
    /// "not applicable" markers for skipped checks.
    pub notes: Vec<String>,
    /// Per-check errors; a failed check never aborts the others.
    pub check_errors: Vec<String>,
}

fn field_range(values: impl Iterator<Item = f64>) -> Range {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for v in values {
        min = min.min(v);
        max = max.max(v);
    }
    Range { min, max }
}

/// Run every applicable check on the surface and classify it.
pub fn run_suite(
    meta: &FamilyMeta,
    surface: &SampledSurface,
    tols: &Tolerances,
) -> VerificationReport {
    let mut notes = Vec::new();
    let mut check_errors = Vec::new();

    let shrinker = surface.max_shrinker_residual();
    let symplectic = surface.max_symplectic_residual();
    let lagrangian = symplectic <= tols.lagrangian;

    let ranges = Ranges {
        h2: field_range(surface.fund.iter().map(|d| d.h2)),
        sigma2: field_range(surface.fund.iter().map(|d| d.sigma2)),
        gauss: field_range(surface.fund.iter().map(|d| d.gauss)),
        phi2: field_range(surface.jets.iter().map(|j| j.phi.norm_sq())),
    };

    // Independent derivative/quadrature checks fan out concurrently; each is
    // pure, and the join order below is fixed, so reports are reproducible.
    type CheckResult<T> = Option<Result<T>>;
    let mut laplacian: CheckResult<f64> = None;
    let mut structure: CheckResult<(f64, f64)> = None;
    let mut divjh: CheckResult<grid::DivJh> = None;
    let mut cubic: CheckResult<f64> = None;
    let mut willmore: CheckResult<(f64, f64, f64)> = None;
    let mut gauss_bonnet: CheckResult<(f64, i64, f64)> = None;
    let mut maslov_res: CheckResult<(f64, f64)> = None;

    if surface.full_domain {
        std::thread::scope(|scope| {
            let lap = scope.spawn(|| grid::laplacian_identity_residual(surface));
            let str_ = scope.spawn(|| grid::structure_residuals(surface));
            let wil = scope.spawn(|| grid::willmore_check(surface));
            let gb = scope.spawn(|| grid::gauss_bonnet(surface, tols));
            let lagr = scope.spawn(|| {
                if lagrangian {
                    (
                        Some(grid::div_jh(surface, tols)),
                        Some(grid::cubic_symmetry_max(surface, tols)),
                        Some(grid::maslov_periods(surface, tols)),
                    )
                } else {
                    (None, None, None)
                }
            });
            laplacian = Some(lap.join().expect("laplacian check"));
            structure = Some(str_.join().expect("structure check"));
            willmore = Some(wil.join().expect("willmore check"));
            gauss_bonnet = Some(gb.join().expect("gauss-bonnet check"));
            let (d, c, m) = lagr.join().expect("lagrangian checks");
            divjh = d;
            cubic = c;
            maslov_res = m;
        });
        if !lagrangian {
            notes.push("div_jh, cubic_symmetry, maslov: not applicable (non-Lagrangian)".into());
        }
    } else {
        notes.push(
            "laplacian, structure, div_jh, cubic_symmetry, integrals, genus, maslov: \
             not applicable (band-only sampling)"
                .into(),
        );
    }

    let mut take = |name: &str, r: CheckResult<f64>| -> Option<f64> {
        match r {
            Some(Ok(v)) => Some(v),
            Some(Err(e)) => {
                check_errors.push(format!("{name}: {e}"));
                None
            }
            None => None,
        }
    };
    let laplacian = take("laplacian", laplacian);
    let cubic_symmetry = take("cubic_symmetry", cubic);

    let (structure_tangent, structure_normal) = match structure {
        Some(Ok((t, n))) => (Some(t), Some(n)),
        Some(Err(e)) => {
            check_errors.push(format!("structure: {e}"));
            (None, None)
        }
        None => (None, None),
    };
    let (div_jh_res, div_jh_max) = match divjh {
        Some(Ok(d)) => (Some(d.max_residual), Some(d.max_div)),
        Some(Err(e)) => {
            check_errors.push(format!("div_jh: {e}"));
            (None, None)
        }
        None => (None, None),
    };
    let (integrals, willmore_ratio) = match willmore {
        Some(Ok((w, area, ratio))) => (
            Integrals { area: Some(area), willmore: Some(w), ..Default::default() },
            Some(ratio),
        ),
        Some(Err(e)) => {
            check_errors.push(format!("willmore: {e}"));
            (Integrals::default(), None)
        }
        None => (Integrals::default(), None),
    };
    let mut integrals = integrals;
    let genus = match gauss_bonnet {
        Some(Ok((total, genus, residual))) => {
            integrals.total_curvature = Some(total);
            integrals.gb_residual = Some(residual);
            Some(genus)
        }
        Some(Err(e)) => {
            check_errors.push(format!("gauss_bonnet: {e}"));
            None
        }
        None => None,
    };
    let maslov = match maslov_res {
        Some(Ok(p)) => Some(p),
        Some(Err(e)) => {
            check_errors.push(format!("maslov: {e}"));
            None
        }
        None => None,
    };

    let residuals = Residuals {
        shrinker,
        symplectic,
        laplacian,
        structure_tangent,
        structure_normal,
        div_jh: div_jh_res,
        cubic_symmetry,
    };

    let flags = compute_flags(&ranges, symplectic, div_jh_max, tols);
    let (conclusion, consistent) =
        classify_parts(&flags, surface.full_domain, genus, &ranges, meta, tols);

    VerificationReport {
        meta: meta.clone(),
        grid: surface.grid,
        full_domain: surface.full_domain,
        residuals,
        ranges,
        integrals,
        genus,
        maslov,
        flags,
        conclusion,
        consistent,
        div_jh_max,
        willmore_ratio,
        notes,
        check_errors,
    }
}

/// Evaluate the hypothesis flags from invariant ranges and residuals.
pub fn compute_flags(
    ranges: &Ranges,
    symplectic: f64,
    div_jh_max: Option<f64>,
    tols: &Tolerances,
) -> HypothesisFlags {
    let constant = |r: &Range| -> HypothesisFlag {
        let spread = r.max - r.min;
        let allowed = tols.constancy * r.max.abs().max(1.0);
        HypothesisFlag::of(spread < allowed, allowed - spread)
    };
    let le = |x: f64, bound: f64| HypothesisFlag::of(x <= bound + tols.bound_slack, bound - x);
    let ge = |x: f64, bound: f64| HypothesisFlag::of(x >= bound - tols.bound_slack, x - bound);

    let gap2 = gap_bound(2).expect("p = 2 is admissible");
    HypothesisFlags {
        h2_constant: constant(&ranges.h2),
        h2_le_2: le(ranges.h2.max, 2.0),
        h2_ge_2: ge(ranges.h2.min, 2.0),
        sigma2_le_2: le(ranges.sigma2.max, 2.0),
        lagrangian: HypothesisFlag::of(symplectic <= tols.lagrangian, tols.lagrangian - symplectic),
        hamiltonian_stationary: match div_jh_max {
            Some(m) => {
                HypothesisFlag::of(m <= tols.hamiltonian_stationary, tols.hamiltonian_stationary - m)
            }
            None => HypothesisFlag::NOT_APPLICABLE,
        },
        spherical: {
            let dev = (ranges.phi2.min - 2.0).abs().max((ranges.phi2.max - 2.0).abs());
            HypothesisFlag::of(dev <= tols.spherical, tols.spherical - dev)
        },
        k_nonneg: ge(ranges.gauss.min, 0.0),
        k_nonpos: le(ranges.gauss.max, 0.0),
        sigma2_le_gap2: le(ranges.sigma2.max, gap2),
    }
}

/// The decision ladder plus the consistency verdict against ground truth.
pub fn classify_parts(
    flags: &HypothesisFlags,
    full_domain: bool,
    genus: Option<i64>,
    ranges: &Ranges,
    meta: &FamilyMeta,
    tols: &Tolerances,
) -> (Conclusion, bool) {
    // Orientability is structural: every family here is a parametrized torus
    // (or the sphere band, which never reaches the orientability clause).
    let orientable = true;

    let conclusion = if !full_domain {
        Conclusion::WithheldBandOnly
    } else if flags.lagrangian.is_true()
        && (flags.h2_constant.is_true() || flags.h2_le_2.is_true() || flags.h2_ge_2.is_true())
    {
        Conclusion::CliffordTorus
    } else if flags.lagrangian.is_true() && orientable && flags.sigma2_le_2.is_true() {
        if flags.k_nonneg.is_true() || flags.k_nonpos.is_true() {
            Conclusion::CliffordTorus
        } else {
            Conclusion::TorusSigmaTwo
        }
    } else if flags.sigma2_le_gap2.is_true()
        && (flags.h2_constant.is_true() || flags.h2_le_2.is_true() || flags.h2_ge_2.is_true())
    {
        Conclusion::CliffordTorus
    } else {
        Conclusion::NoRigidity
    };

    let consistent = match conclusion {
        Conclusion::CliffordTorus => meta.is_clifford,
        Conclusion::TorusSigmaTwo => {
            genus == Some(1)
                && (ranges.sigma2.min - 2.0).abs() <= tols.constancy * 2.0
                && (ranges.sigma2.max - 2.0).abs() <= tols.constancy * 2.0
        }
        Conclusion::NoRigidity => !meta.is_clifford,
        Conclusion::WithheldBandOnly => true,
    };
    (conclusion, consistent)
}

/// True iff some Maslov period is nontrivially large. Errors on
/// non-Lagrangian input (no periods were computed).
pub fn maslov_nontriviality(report: &VerificationReport, tols: &Tolerances) -> Result<bool> {
    match report.maslov {
        Some((pu, pv)) => Ok(pu.abs().max(pv.abs()) > tols.maslov),
        None => Err(Error::NonLagrangian { residual: report.residuals.symplectic, tol: tols.lagrangian }),
    }
}

/// Threshold failures that make a verification run exit nonzero.
pub fn compute_failures(report: &VerificationReport, tols: &Tolerances) -> Vec<String> {
    let mut failures = report.check_errors.clone();
    let kind = report.meta.kind;
    let residual_tol = tols.residual(kind);
    let res = &report.residuals;

    if res.shrinker > residual_tol {
        failures.push(format!(
            "shrinker residual {:.3e} exceeds {residual_tol:.0e}",
            res.shrinker
        ));
    }
    if report.meta.expect_lagrangian && !report.flags.lagrangian.is_true() {
        failures.push(format!(
            "family should be Lagrangian but max symplectic residual is {:.3e}",
            res.symplectic
        ));
    }
    if let Some(l) = res.laplacian {
        if l > tols.laplacian {
            failures.push(format!("laplacian identity residual {l:.3e} exceeds {:.0e}", tols.laplacian));
        }
    }
    for (name, value) in [
        ("structure tangent", res.structure_tangent),
        ("structure normal", res.structure_normal),
        ("div JH identity", res.div_jh),
    ] {
        if let Some(v) = value {
            if v > tols.structure {
                failures.push(format!("{name} residual {v:.3e} exceeds {:.0e}", tols.structure));
            }
        }
    }
    if let Some(c) = res.cubic_symmetry {
        if c > tols.cubic_symmetry {
            failures.push(format!(
                "cubic form symmetry defect {c:.3e} exceeds {:.0e}",
                tols.cubic_symmetry
            ));
        }
    }
    if let Some(ratio) = report.willmore_ratio {
        let dev = (ratio - 2.0).abs();
        if dev > tols.willmore(kind) {
            failures.push(format!(
                "willmore ratio deviates from 2 by {dev:.3e} (allowed {:.0e})",
                tols.willmore(kind)
            ));
        }
    }
    if let Some(gb) = report.integrals.gb_residual {
        if gb > tols.gauss_bonnet {
            failures.push(format!(
                "Gauss-Bonnet formula residual {gb:.3e} exceeds {:.0e}",
                tols.gauss_bonnet
            ));
        }
    }
    if let Some(genus) = report.genus {
        if genus != 1 {
            failures.push(format!("genus estimate {genus} (expected 1 for a torus)"));
        }
    }
    if report.maslov.is_some() {
        if let Ok(false) = maslov_nontriviality(report, tols) {
            failures.push("all Maslov periods are numerically trivial".into());
        }
    }
    if !report.consistent {
        failures.push(format!(
            "classification {:?} contradicts ground truth for {}",
            report.conclusion.as_str(),
            report.meta.label()
        ));
    }
    failures
}

// ---------------------------------------------------------------------------
// JSON serialization: fixed key set, fixed order, 17 significant digits.
// ---------------------------------------------------------------------------

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    match x {
        Some(v) => fmt_f64(v),
        None => "null".into(),
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn flag_json(out: &mut String, name: &str, flag: &HypothesisFlag) {
    let value = match flag.value {
        Some(true) => "true",
        Some(false) => "false",
        None => "null",
    };
    let _ = write!(out, "\"{name}\":{{\"value\":{value},\"margin\":{}}}", fmt_opt(flag.margin));
}

impl VerificationReport {
    /// Contract JSON document. Key set, spelling, order, and the 17
    /// significant digit float format are all fixed; runs with identical
    /// inputs produce byte-identical output.
    pub fn to_json(&self) -> String {
        self.render_json(None)
    }

    /// Same document with a trailing machine-readable failure list.
    pub fn to_json_with_failures(&self, failures: &[String]) -> String {
        self.render_json(Some(failures))
    }

    fn render_json(&self, failures: Option<&[String]>) -> String {
        let mut s = String::with_capacity(2048);
        let _ = write!(s, "{{\"family\":\"{}\",\"params\":{{", escape(&self.meta.family));
        for (i, (k, v)) in self.meta.params.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            match v {
                ParamValue::Int(n) => {
                    let _ = write!(s, "\"{}\":{n}", escape(k));
                }
                ParamValue::Str(t) => {
                    let _ = write!(s, "\"{}\":\"{}\"", escape(k), escape(t));
                }
            }
        }
        let _ = write!(
            s,
            "}},\"grid\":{{\"nu\":{},\"nv\":{},\"Tu\":{},\"Tv\":{}}}",
            self.grid.nu,
            self.grid.nv,
            fmt_f64(self.grid.tu),
            fmt_f64(self.grid.tv)
        );
        let r = &self.residuals;
        let _ = write!(
            s,
            ",\"residuals\":{{\"shrinker\":{},\"symplectic\":{},\"laplacian\":{},\
             \"structure_tangent\":{},\"structure_normal\":{},\"div_jh\":{},\"cubic_symmetry\":{}}}",
            fmt_f64(r.shrinker),
            fmt_f64(r.symplectic),
            fmt_opt(r.laplacian),
            fmt_opt(r.structure_tangent),
            fmt_opt(r.structure_normal),
            fmt_opt(r.div_jh),
            fmt_opt(r.cubic_symmetry)
        );
        let range = |rg: &Range| format!("[{},{}]", fmt_f64(rg.min), fmt_f64(rg.max));
        let _ = write!(
            s,
            ",\"ranges\":{{\"H2\":{},\"sigma2\":{},\"K\":{},\"phi2\":{}}}",
            range(&self.ranges.h2),
            range(&self.ranges.sigma2),
            range(&self.ranges.gauss),
            range(&self.ranges.phi2)
        );
        let ints = &self.integrals;
        let _ = write!(
            s,
            ",\"integrals\":{{\"area\":{},\"willmore\":{},\"total_curvature\":{},\"gb_residual\":{}}}",
            fmt_opt(ints.area),
            fmt_opt(ints.willmore),
            fmt_opt(ints.total_curvature),
            fmt_opt(ints.gb_residual)
        );
        match self.genus {
            Some(g) => {
                let _ = write!(s, ",\"genus\":{g}");
            }
            None => s.push_str(",\"genus\":null"),
        }
        match self.maslov {
            Some((pu, pv)) => {
                let _ = write!(s, ",\"maslov\":[{},{}]", fmt_f64(pu), fmt_f64(pv));
            }
            None => s.push_str(",\"maslov\":null"),
        }
        s.push_str(",\"flags\":{");
        let f = &self.flags;
        let flags: [(&str, &HypothesisFlag); 10] = [
            ("h2_constant", &f.h2_constant),
            ("h2_le_2", &f.h2_le_2),
            ("h2_ge_2", &f.h2_ge_2),
            ("sigma2_le_2", &f.sigma2_le_2),
            ("lagrangian", &f.lagrangian),
            ("hamiltonian_stationary", &f.hamiltonian_stationary),
            ("spherical", &f.spherical),
            ("k_nonneg", &f.k_nonneg),
            ("k_nonpos", &f.k_nonpos),
            ("sigma2_le_gap2", &f.sigma2_le_gap2),
        ];
        for (i, (name, flag)) in flags.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            flag_json(&mut s, name, flag);
        }
        let _ = write!(
            s,
            "}},\"conclusion\":\"{}\",\"consistent\":{}",
            self.conclusion.as_str(),
            self.consistent
        );
        if let Some(failures) = failures {
            s.push_str(",\"failures\":[");
            for (i, f) in failures.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                let _ = write!(s, "\"{}\"", escape(f));
            }
            s.push(']');
        }
        s.push('}');
        s
    }
}
