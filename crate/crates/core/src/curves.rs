//! Planar profile curves for the ODE-built torus families.
//!
//! Two curve laws are integrated here, both for unit-speed curves
//! `Gamma(t)` in the plane identified with C:
//!
//! * product-family curves: `kappa = <Gamma', i Gamma>`, with the closed
//!   form `kappa = rho e^{r^2/2}` and first integral
//!   `r^2 (1 - r'^2) e^{-r^2} = rho^2`, admissible `rho in (0, e^{-1/2}]`;
//! * equivariant-family curves: `kappa = <Gamma', i Gamma>(r^2-1)/r^2`, with
//!   `kappa = E e^{r^2/2}(r^2-1)/r^3` and first integral
//!   `r^4 (1 - r'^2) e^{-r^2} = E^2`, admissible `E in (0, 2/e]`.
//!
//! The upper endpoint of each interval is the circle (radius 1, resp.
//! sqrt 2). Below it, the radius oscillates between the two roots of the
//! first integral at `r' = 0`, and the curve closes exactly when the polar
//! advance per radial period is a rational multiple of 2 pi. `shoot_closed`
//! root-finds the conserved constant for a prescribed rotation number p/q.

use crate::error::{Error, Result};
use crate::rk::{Driver, OdeSystem, Options, Step};
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::io::Write;

/// Which curvature law a profile curve follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    AbreschLanger,
    Anciaux,
}

impl CurveKind {
    /// Conserved constant of the circle solution; upper endpoint of the
    /// admissible interval.
    pub fn circle_constant(&self) -> f64 {
        match self {
            CurveKind::AbreschLanger => (-0.5f64).exp(),
            CurveKind::Anciaux => 2.0 * (-1.0f64).exp(),
        }
    }

    /// Radius of the circle solution.
    pub fn circle_radius(&self) -> f64 {
        match self {
            CurveKind::AbreschLanger => 1.0,
            CurveKind::Anciaux => 2.0f64.sqrt(),
        }
    }

    /// Open interval of rotation numbers of closed noncircular solutions.
    pub fn rotation_interval(&self) -> (f64, f64) {
        match self {
            CurveKind::AbreschLanger => (0.5, FRAC_1_SQRT_2),
            CurveKind::Anciaux => (0.25, 0.5),
        }
    }

    /// kappa = <Gamma', i Gamma> * factor(r^2).
    fn law_factor(&self, r2: f64) -> f64 {
        match self {
            CurveKind::AbreschLanger => 1.0,
            CurveKind::Anciaux => (r2 - 1.0) / r2,
        }
    }

    /// Closed-form curvature as a function of the radius.
    pub fn closed_form_kappa(&self, constant: f64, r: f64) -> f64 {
        let r2 = r * r;
        match self {
            CurveKind::AbreschLanger => constant * (0.5 * r2).exp(),
            CurveKind::Anciaux => constant * (0.5 * r2).exp() * (r2 - 1.0) / (r2 * r),
        }
    }

    /// `f(r) = r^m e^{-r^2/2}` with m = 1 (product law) or 2 (equivariant
    /// law); turning radii are the roots of `f(r) = constant`.
    fn radial_profile(&self, r: f64) -> f64 {
        let base = (-0.5 * r * r).exp();
        match self {
            CurveKind::AbreschLanger => r * base,
            CurveKind::Anciaux => r * r * base,
        }
    }

    /// First integral `r^{2m} (1 - r'^2) e^{-r^2}` evaluated on a state.
    fn first_integral(&self, s: &[f64; 5]) -> f64 {
        let [x, y, tx, ty, _] = *s;
        let r2 = x * x + y * y;
        let w = x * tx + y * ty; // r r'
        let val = (r2 - w * w) * (-r2).exp();
        match self {
            CurveKind::AbreschLanger => val,
            CurveKind::Anciaux => r2 * val,
        }
    }
}

/// A curve law together with its conserved constant.
#[derive(Debug, Clone, Copy)]
pub struct CurveFamily {
    pub kind: CurveKind,
    pub constant: f64,
}

impl CurveFamily {
    pub fn new(kind: CurveKind, constant: f64) -> Result<Self> {
        let hi = kind.circle_constant();
        if !(constant > 0.0 && constant <= hi * (1.0 + 1e-12)) {
            return Err(Error::InadmissibleParams(format!(
                "conserved constant {constant} outside (0, {hi}]"
            )));
        }
        Ok(CurveFamily { kind, constant })
    }

    /// Roots of the radial profile; both collapse to the circle radius at
    /// the endpoint constant.
    pub fn turning_radii(&self) -> (f64, f64) {
        let peak = self.kind.circle_radius();
        if self.constant >= self.kind.circle_constant() * (1.0 - 1e-15) {
            return (peak, peak);
        }
        let f = |r: f64| self.kind.radial_profile(r) - self.constant;
        let bisect = |mut lo: f64, mut hi: f64| -> f64 {
            // invariant: sign change across [lo, hi]
            let flo = f(lo);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if hi - lo <= f64::EPSILON * hi.abs() {
                    break;
                }
                if (f(mid) > 0.0) == (flo > 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        let mut lo = peak;
        while f(lo) > 0.0 {
            lo *= 0.5;
        }
        let r_min = bisect(lo, peak);
        let mut hi = peak;
        while f(hi) > 0.0 {
            hi *= 1.5;
        }
        let r_max = bisect(peak, hi);
        (r_min, r_max)
    }

    /// Standard initial state: outer turning point on the positive x-axis,
    /// tangent perpendicular to the radius. Removes the r' sign ambiguity.
    pub fn standard_start(&self) -> [f64; 5] {
        let (_, r_max) = self.turning_radii();
        [r_max, 0.0, 0.0, 1.0, 0.0]
    }

    /// `r'^2` from the first integral at radius r; negative outside the band.
    fn radial_speed_sq(&self, r: f64) -> f64 {
        let prof = self.kind.radial_profile(r);
        1.0 - (self.constant / prof) * (self.constant / prof)
    }
}

/// State layout: [x, y, tx, ty, theta] with (tx, ty) the unit tangent and
/// theta the accumulated polar angle.
struct CurveOde {
    kind: CurveKind,
}

impl OdeSystem<5> for CurveOde {
    fn rhs(&self, s: &[f64; 5]) -> [f64; 5] {
        let [x, y, tx, ty, _] = *s;
        let r2 = x * x + y * y;
        let cross = x * ty - y * tx; // <Gamma', i Gamma>
        let kappa = cross * self.kind.law_factor(r2);
        [tx, ty, -kappa * ty, kappa * tx, cross / r2]
    }
}

/// Post-step projection: renormalize the tangent and, when drift has pushed
/// the state past a turning point (radial speed exceeding what the first
/// integral allows at the current radius, the square-root-domain hazard),
/// re-project r' onto the admissible value. Re-projecting unconditionally
/// would be ill-conditioned exactly at the turning points, where the first
/// integral is insensitive to r', so the correction fires only on actual
/// violations.
fn make_projector(family: CurveFamily) -> impl Fn(&mut [f64; 5]) {
    move |s: &mut [f64; 5]| {
        let norm = (s[2] * s[2] + s[3] * s[3]).sqrt();
        s[2] /= norm;
        s[3] /= norm;
        let r = (s[0] * s[0] + s[1] * s[1]).sqrt();
        let er = [s[0] / r, s[1] / r];
        let et = [-er[1], er[0]];
        let a = s[2] * er[0] + s[3] * er[1]; // r'
        let allowed2 = family.radial_speed_sq(r).max(0.0);
        if a * a > allowed2 {
            let b = s[2] * et[0] + s[3] * et[1];
            let a_new = allowed2.sqrt().copysign(a);
            let b_new = (1.0 - allowed2).max(0.0).sqrt().copysign(b);
            s[2] = a_new * er[0] + b_new * et[0];
            s[3] = a_new * er[1] + b_new * et[1];
        }
    }
}

/// One sample of an arclength-parametrized profile curve.
#[derive(Debug, Clone, Copy)]
pub struct CurveSample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub tx: f64,
    pub ty: f64,
    pub r: f64,
    pub kappa: f64,
}

impl CurveSample {
    fn from_state(kind: CurveKind, t: f64, s: &[f64; 5]) -> CurveSample {
        let r2 = s[0] * s[0] + s[1] * s[1];
        let cross = s[0] * s[3] - s[1] * s[2];
        CurveSample {
            t,
            x: s[0],
            y: s[1],
            tx: s[2],
            ty: s[3],
            r: r2.sqrt(),
            kappa: cross * kind.law_factor(r2),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum CurveSource {
    /// Exact circle solution.
    Circle,
    /// Integrated from this initial state.
    Ode { init: [f64; 5] },
}

/// A closed (or fixed-length) arclength-sampled profile curve.
#[derive(Debug, Clone)]
pub struct ProfileCurve {
    pub kind: CurveKind,
    pub constant: f64,
    /// Parameter length covered by `samples` (the full period for closed curves).
    pub period: f64,
    /// Polar advance per radial period over 2 pi; `None` for circles.
    pub rotation: Option<f64>,
    pub r_min: f64,
    pub r_max: f64,
    /// `|Gamma(T) - Gamma(0)| + |Gamma'(T) - Gamma'(0)|`.
    pub closure_error: f64,
    /// Max relative drift of the first integral over the samples.
    pub drift: f64,
    /// Max |kappa from the law - closed-form kappa| over the samples.
    pub curvature_defect: f64,
    /// Samples at uniform parameter values, endpoint included.
    pub samples: Vec<CurveSample>,
    source: CurveSource,
}

const DRIFT_ERROR: f64 = 1e-8;
const KAPPA_DEFECT_ERROR: f64 = 1e-8;
const CLOSURE_ERROR: f64 = 1e-6;
const ROTATION_TOL: f64 = 1e-10;
const STORED_SAMPLES: usize = 512;

fn ode_options() -> Options {
    Options { rtol: 1e-13, atol: 1e-15, h_initial: 1e-4, h_max: 0.2, max_steps: 50_000_000 }
}

/// Integrate a profile curve of the given family over a fixed parameter
/// length from explicit initial data.
pub fn integrate_curve(
    family: &CurveFamily,
    position: (f64, f64),
    tangent: (f64, f64),
    length: f64,
) -> Result<ProfileCurve> {
    let tnorm = (tangent.0 * tangent.0 + tangent.1 * tangent.1).sqrt();
    if (tnorm - 1.0).abs() > 1e-9 {
        return Err(Error::InconsistentInitialData(format!(
            "tangent must be unit, |t| = {tnorm}"
        )));
    }
    let init = [position.0, position.1, tangent.0, tangent.1, 0.0];
    let c2 = family.constant * family.constant;
    let f0 = family.kind.first_integral(&init);
    if ((f0 - c2) / c2).abs() > 1e-8 {
        return Err(Error::InconsistentInitialData(format!(
            "first integral {f0:.12e} does not match constant^2 = {c2:.12e}"
        )));
    }
    if length.is_nan() || length <= 0.0 {
        return Err(Error::InconsistentInitialData("length must be positive".into()));
    }
    build_curve(family, init, length, None)
}

/// Resample and measure a curve between 0 and `length`, storing
/// `STORED_SAMPLES + 1` uniform samples (endpoint included).
fn build_curve(
    family: &CurveFamily,
    init: [f64; 5],
    length: f64,
    rotation: Option<f64>,
) -> Result<ProfileCurve> {
    let sys = CurveOde { kind: family.kind };
    let project = make_projector(*family);
    let mut driver = Driver::new(&sys, 0.0, init, ode_options()).with_projection(&project);
    let c2 = family.constant * family.constant;
    let mut samples = Vec::with_capacity(STORED_SAMPLES + 1);
    let mut drift: f64 = 0.0;
    let mut defect: f64 = 0.0;
    for k in 0..=STORED_SAMPLES {
        let t_k = k as f64 * length / STORED_SAMPLES as f64;
        driver.advance_to(t_k)?;
        let sample = CurveSample::from_state(family.kind, t_k, &driver.y);
        drift = drift.max(((family.kind.first_integral(&driver.y) - c2) / c2).abs());
        defect = defect
            .max((sample.kappa - family.kind.closed_form_kappa(family.constant, sample.r)).abs());
        samples.push(sample);
    }
    if drift > DRIFT_ERROR {
        return Err(Error::ExcessiveDrift { drift, tol: DRIFT_ERROR });
    }
    if defect > KAPPA_DEFECT_ERROR {
        return Err(Error::IntegratorFailure(format!(
            "curvature law and closed form disagree by {defect:.3e}"
        )));
    }
    let first = &samples[0];
    let last = &samples[samples.len() - 1];
    let closure_error = ((last.x - first.x).powi(2) + (last.y - first.y).powi(2)).sqrt()
        + ((last.tx - first.tx).powi(2) + (last.ty - first.ty).powi(2)).sqrt();
    let (r_min, r_max) = family.turning_radii();
    Ok(ProfileCurve {
        kind: family.kind,
        constant: family.constant,
        period: length,
        rotation,
        r_min,
        r_max,
        closure_error,
        drift,
        curvature_defect: defect,
        samples,
        source: CurveSource::Ode { init },
    })
}

/// Zero crossings of `w = <Gamma, Gamma'>` wanted by the event scan.
#[derive(Clone, Copy, PartialEq)]
enum Crossing {
    /// w: negative -> positive (inner turning point, r minimal).
    Up,
    /// w: positive -> negative (outer turning point, r maximal).
    Down,
}

fn w_of(s: &[f64; 5]) -> f64 {
    s[0] * s[2] + s[1] * s[3]
}

/// Advance the driver to the next requested crossing of w and land on it.
fn advance_to_crossing(
    driver: &mut Driver<'_, CurveOde, 5>,
    sys: &CurveOde,
    want: Crossing,
    t_guard: f64,
) -> Result<()> {
    let mut prev = w_of(&driver.y);
    loop {
        let step = driver.advance()?;
        let now = w_of(&driver.y);
        let crossed = match want {
            Crossing::Up => prev < 0.0 && now >= 0.0,
            Crossing::Down => prev > 0.0 && now <= 0.0,
        };
        if crossed {
            polish_crossing(driver, sys, &step)?;
            return Ok(());
        }
        prev = now;
        if driver.t > t_guard {
            return Err(Error::CircleDegenerate);
        }
    }
}

/// Bisect the cubic Hermite interpolant of the step for the zero of w, then
/// Newton-polish with tiny forced integrator steps.
fn polish_crossing(
    driver: &mut Driver<'_, CurveOde, 5>,
    sys: &CurveOde,
    step: &Step<5>,
) -> Result<()> {
    let mut lo = step.t0;
    let mut hi = step.t1;
    let w_lo = w_of(&step.y0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let w_mid = w_of(&step.interpolate(mid));
        if (w_mid > 0.0) == (w_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t_guess = 0.5 * (lo + hi);
    driver.set_state(step.t0, step.y0);
    driver.advance_to(t_guess)?;
    for _ in 0..6 {
        let w = w_of(&driver.y);
        let f = sys.rhs(&driver.y);
        let wp = driver.y[2] * driver.y[2]
            + driver.y[3] * driver.y[3]
            + driver.y[0] * f[2]
            + driver.y[1] * f[3];
        let delta = -w / wp;
        if delta.abs() < 1e-15 * driver.t.max(1.0) {
            break;
        }
        driver.force_step(delta);
    }
    Ok(())
}

/// Polar advance per radial oscillation period, divided by 2 pi.
///
/// Integrates from the outer turning point until the radius has passed one
/// minimum and returned to the next maximum.
pub fn rotation_number(family: &CurveFamily) -> Result<f64> {
    let (r_min, r_max) = family.turning_radii();
    if (r_max - r_min) < 1e-12 * r_max {
        return Err(Error::CircleDegenerate);
    }
    let sys = CurveOde { kind: family.kind };
    let project = make_projector(*family);
    let mut driver =
        Driver::new(&sys, 0.0, family.standard_start(), ode_options()).with_projection(&project);
    // One step first: w starts at exactly 0 and goes negative.
    driver.advance()?;
    let guard = 1.0e4;
    advance_to_crossing(&mut driver, &sys, Crossing::Up, guard)?;
    advance_to_crossing(&mut driver, &sys, Crossing::Down, guard)?;
    Ok(driver.y[4] / (2.0 * PI))
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Rotation number by quadrature instead of integration.
///
/// The first integral makes `r^{m+1} theta' e^{-r^2/2}` constant along the
/// curve (m = 1 for the product law, 2 for the equivariant law), so
///
///   rotation = (1/pi) * integral over [r_min, r_max] of
///              c e^{r^2/2} / ( r^{m+1} sqrt(1 - c^2 e^{r^2} / r^{2m}) ) dr.
///
/// Substituting r = mid - amp cos(psi) removes both square-root endpoint
/// singularities, and the midpoint rule in psi then converges spectrally.
/// Unlike the event-based route, the result is a smooth function of the
/// constant, which lets the shooting root-finder converge to machine
/// precision; the two routes cross-check each other.
pub fn rotation_by_quadrature(family: &CurveFamily, nodes: usize) -> Result<f64> {
    let (r_min, r_max) = family.turning_radii();
    if (r_max - r_min) < 1e-12 * r_max {
        return Err(Error::CircleDegenerate);
    }
    let amp = 0.5 * (r_max - r_min);
    let mut sum = 0.0;
    for j in 0..nodes {
        let psi = (j as f64 + 0.5) * PI / nodes as f64;
        let s = (0.5 * psi).sin();
        let c = (0.5 * psi).cos();
        let below = 2.0 * amp * s * s; // r - r_min
        let above = 2.0 * amp * c * c; // r_max - r
        let r = r_min + below;
        let capital_g = family.radial_speed_sq(r) / (below * above);
        let theta_prime = match family.kind {
            CurveKind::AbreschLanger => family.constant * (0.5 * r * r).exp() / (r * r),
            CurveKind::Anciaux => family.constant * (0.5 * r * r).exp() / (r * r * r),
        };
        sum += theta_prime / capital_g.sqrt();
    }
    Ok(sum / nodes as f64)
}

/// Root-find the conserved constant so the rotation number equals p/q, then
/// integrate q radial periods into a closed curve.
pub fn shoot_closed(kind: CurveKind, p: u32, q: u32) -> Result<(CurveFamily, ProfileCurve)> {
    if p == 0 || q == 0 || gcd(p, q) != 1 {
        return Err(Error::InadmissibleParams(format!(
            "(p, q) = ({p}, {q}) must be positive and relatively prime"
        )));
    }
    let target = p as f64 / q as f64;
    let (lo, hi) = kind.rotation_interval();
    if !(target > lo && target < hi) {
        return Err(Error::InadmissibleRotation { p, q, lo, hi });
    }

    let c_circle = kind.circle_constant();
    // Rotation approaches the upper interval endpoint at the circle constant
    // and decreases towards the lower endpoint; scan a ladder for a bracket.
    // The root-finder works on the quadrature route, which is smooth in the
    // constant; the event-based route verifies the result below.
    let fractions = [
        1.0 - 1e-7,
        0.97,
        0.9,
        0.8,
        0.65,
        0.5,
        0.35,
        0.22,
        0.12,
        0.06,
        0.025,
        0.008,
        0.002,
    ];
    let eval = |c: f64| -> Result<f64> {
        let fam = CurveFamily::new(kind, c)?;
        Ok(rotation_by_quadrature(&fam, 2048)? - target)
    };
    let mut bracket: Option<(f64, f64, f64, f64)> = None;
    let mut prev: Option<(f64, f64)> = None;
    for frac in fractions {
        let c = c_circle * frac;
        let f = eval(c)?;
        if let Some((cp, fp)) = prev {
            if (f > 0.0) != (fp > 0.0) {
                bracket = Some((c, f, cp, fp));
                break;
            }
        }
        prev = Some((c, f));
    }
    let (mut a, mut fa, mut b, mut fb) = bracket.ok_or(Error::BracketFailure { target })?;

    // Bisection to a comfortable width, then guarded secant to the floor.
    while (b - a).abs() > 1e-6 * c_circle {
        let mid = 0.5 * (a + b);
        let fm = eval(mid)?;
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    for _ in 0..80 {
        if (b - a).abs() <= 4.0 * f64::EPSILON * b.abs() || best.1.abs() < 1e-14 {
            break;
        }
        let mut c = b - fb * (b - a) / (fb - fa);
        let (lo_c, hi_c) = if a < b { (a, b) } else { (b, a) };
        if !(c > lo_c && c < hi_c) || (fb - fa) == 0.0 {
            c = 0.5 * (a + b);
        }
        let fc = eval(c)?;
        if fc.abs() < best.1.abs() {
            best = (c, fc);
        }
        if (fc > 0.0) == (fa > 0.0) {
            a = c;
            fa = fc;
        } else {
            b = c;
            fb = fc;
        }
    }
    let (c_star, _) = best;
    let family = CurveFamily::new(kind, c_star)?;

    // Contract check on the event-based route, which also cross-validates
    // the two rotation computations against each other.
    let measured = rotation_number(&family)?;
    if (measured - target).abs() > ROTATION_TOL {
        return Err(Error::IntegratorFailure(format!(
            "shooting stalled: rotation error {:.3e} above {ROTATION_TOL:.0e}",
            (measured - target).abs()
        )));
    }

    // One continuous pass through q radial periods measures the true period
    // and the closure error.
    let sys = CurveOde { kind };
    let project = make_projector(family);
    let init = family.standard_start();
    let mut driver = Driver::new(&sys, 0.0, init, ode_options()).with_projection(&project);
    driver.advance()?;
    let guard = 1.0e5;
    for _ in 0..q {
        advance_to_crossing(&mut driver, &sys, Crossing::Up, guard)?;
        advance_to_crossing(&mut driver, &sys, Crossing::Down, guard)?;
    }
    let period = driver.t;
    let closure_error = ((driver.y[0] - init[0]).powi(2) + (driver.y[1] - init[1]).powi(2)).sqrt()
        + ((driver.y[2] - init[2]).powi(2) + (driver.y[3] - init[3]).powi(2)).sqrt();
    if closure_error > CLOSURE_ERROR {
        return Err(Error::IntegratorFailure(format!(
            "closed curve does not close: error {closure_error:.3e}"
        )));
    }
    let measured_rotation = driver.y[4] / (2.0 * PI * q as f64);
    let mut curve = build_curve(&family, init, period, Some(measured_rotation))?;
    curve.closure_error = closure_error;
    Ok((family, curve))
}

impl ProfileCurve {
    /// Exact circle solution of the given law.
    pub fn circle(kind: CurveKind) -> ProfileCurve {
        let radius = kind.circle_radius();
        let period = 2.0 * PI * radius;
        let kappa = 1.0 / radius;
        let n = STORED_SAMPLES;
        let samples = (0..=n)
            .map(|k| {
                let t = k as f64 * period / n as f64;
                let (s, c) = (t / radius).sin_cos();
                CurveSample {
                    t,
                    x: radius * c,
                    y: radius * s,
                    tx: -s,
                    ty: c,
                    r: radius,
                    kappa,
                }
            })
            .collect();
        ProfileCurve {
            kind,
            constant: kind.circle_constant(),
            period,
            rotation: None,
            r_min: radius,
            r_max: radius,
            closure_error: 0.0,
            drift: 0.0,
            curvature_defect: 0.0,
            samples,
            source: CurveSource::Circle,
        }
    }

    pub fn is_circle(&self) -> bool {
        matches!(self.source, CurveSource::Circle)
    }

    /// Curve state at an arbitrary parameter value.
    pub fn state_at(&self, t: f64) -> Result<CurveSample> {
        match self.source {
            CurveSource::Circle => {
                let radius = self.kind.circle_radius();
                let (s, c) = (t / radius).sin_cos();
                Ok(CurveSample {
                    t,
                    x: radius * c,
                    y: radius * s,
                    tx: -s,
                    ty: c,
                    r: radius,
                    kappa: 1.0 / radius,
                })
            }
            CurveSource::Ode { init } => {
                let family = CurveFamily::new(self.kind, self.constant)?;
                let sys = CurveOde { kind: self.kind };
                let project = make_projector(family);
                let mut driver =
                    Driver::new(&sys, 0.0, init, ode_options()).with_projection(&project);
                driver.advance_to(t)?;
                Ok(CurveSample::from_state(self.kind, t, &driver.y))
            }
        }
    }

    /// Curve states at n uniform parameter values over the period, endpoint
    /// excluded; the sampling used to build torus grids.
    pub fn resample_periodic(&self, n: usize) -> Result<Vec<CurveSample>> {
        match self.source {
            CurveSource::Circle => {
                let radius = self.kind.circle_radius();
                Ok((0..n)
                    .map(|k| {
                        let t = k as f64 * self.period / n as f64;
                        let (s, c) = (t / radius).sin_cos();
                        CurveSample {
                            t,
                            x: radius * c,
                            y: radius * s,
                            tx: -s,
                            ty: c,
                            r: radius,
                            kappa: 1.0 / radius,
                        }
                    })
                    .collect())
            }
            CurveSource::Ode { init } => {
                let family = CurveFamily::new(self.kind, self.constant)?;
                let sys = CurveOde { kind: self.kind };
                let project = make_projector(family);
                let mut driver =
                    Driver::new(&sys, 0.0, init, ode_options()).with_projection(&project);
                let mut out = Vec::with_capacity(n);
                for k in 0..n {
                    let t_k = k as f64 * self.period / n as f64;
                    driver.advance_to(t_k)?;
                    out.push(CurveSample::from_state(self.kind, t_k, &driver.y));
                }
                Ok(out)
            }
        }
    }

    /// Dump as CSV with the fixed header `t,x,y,r,kappa`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "t,x,y,r,kappa")?;
        for s in &self.samples {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                s.t, s.x, s.y, s.r, s.kappa
            )?;
        }
        Ok(())
    }
}

/// Rotation numbers on a ladder of conserved constants; lets callers check
/// empirically that rotation responds monotonically to the constant.
pub fn rotation_ladder(kind: CurveKind, n: usize) -> Result<Vec<(f64, f64)>> {
    let c_circle = kind.circle_constant();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let frac = 0.05 + 0.93 * (i as f64 / (n - 1).max(1) as f64);
        let c = c_circle * frac;
        let rot = rotation_number(&CurveFamily::new(kind, c)?)?;
        out.push((c, rot));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn al_circle_constant_is_unit_circle() {
        let family = CurveFamily::new(CurveKind::AbreschLanger, (-0.5f64).exp()).unwrap();
        let (r_min, r_max) = family.turning_radii();
        assert!((r_min - 1.0).abs() < 1e-12 && (r_max - 1.0).abs() < 1e-12);
        // Integrating from r = 1 stays on the unit circle, kappa = 1.
        let curve =
            integrate_curve(&family, (1.0, 0.0), (0.0, 1.0), 2.0 * PI).unwrap();
        for s in &curve.samples {
            assert!((s.r - 1.0).abs() < 1e-10);
            assert!((s.kappa - 1.0).abs() < 1e-10);
        }
        assert!(curve.closure_error < 1e-9, "closure {}", curve.closure_error);
    }

    #[test]
    fn anciaux_circle_constant_is_sqrt2_circle() {
        let kind = CurveKind::Anciaux;
        let family = CurveFamily::new(kind, kind.circle_constant()).unwrap();
        let period = 2.0 * 2.0f64.sqrt() * PI;
        let curve = integrate_curve(&family, (2.0f64.sqrt(), 0.0), (0.0, 1.0), period).unwrap();
        for s in &curve.samples {
            assert!((s.r - 2.0f64.sqrt()).abs() < 1e-10);
            assert!((s.kappa - FRAC_1_SQRT_2).abs() < 1e-10);
        }
        assert!(curve.closure_error < 1e-9);
    }

    #[test]
    fn al_noncircular_band_and_drift() {
        let family = CurveFamily::new(CurveKind::AbreschLanger, 0.5).unwrap();
        let (r_min, r_max) = family.turning_radii();
        assert!(0.0 < r_min && r_min < 1.0 && 1.0 < r_max);
        // Band endpoints are roots of r^2 e^{-r^2} = rho^2.
        for r in [r_min, r_max] {
            assert!((r * r * (-r * r).exp() - 0.25).abs() < 1e-12);
        }
        let start = family.standard_start();
        let curve = integrate_curve(&family, (start[0], start[1]), (start[2], start[3]), 20.0).unwrap();
        assert!(curve.drift < 1e-9, "drift {}", curve.drift);
        for s in &curve.samples {
            let speed = (s.tx * s.tx + s.ty * s.ty).sqrt();
            assert!((speed - 1.0).abs() < 1e-10);
            assert!(s.r <= r_max + 1e-8 && s.r >= r_min - 1e-8);
        }
    }

    #[test]
    fn inconsistent_initial_data_is_rejected() {
        let family = CurveFamily::new(CurveKind::AbreschLanger, 0.5).unwrap();
        // Radius inside the forbidden zone: r^2 e^{-r^2} < rho^2 there.
        assert!(matches!(
            integrate_curve(&family, (0.1, 0.0), (0.0, 1.0), 1.0),
            Err(Error::InconsistentInitialData(_))
        ));
        // Non-unit tangent.
        assert!(matches!(
            integrate_curve(&family, (family.turning_radii().1, 0.0), (0.0, 2.0), 1.0),
            Err(Error::InconsistentInitialData(_))
        ));
    }

    #[test]
    fn rotation_number_limits_at_the_circle() {
        // Approaching the circle constant from below, the rotation number
        // approaches 1/sqrt(2) (product law) and 1/2 (equivariant law).
        let al = CurveFamily::new(
            CurveKind::AbreschLanger,
            CurveKind::AbreschLanger.circle_constant() * (1.0 - 1e-6),
        )
        .unwrap();
        let rot = rotation_number(&al).unwrap();
        assert!((rot - FRAC_1_SQRT_2).abs() < 1e-4, "AL limit rotation {rot}");

        let an = CurveFamily::new(
            CurveKind::Anciaux,
            CurveKind::Anciaux.circle_constant() * (1.0 - 1e-6),
        )
        .unwrap();
        let rot = rotation_number(&an).unwrap();
        assert!((rot - 0.5).abs() < 1e-4, "equivariant limit rotation {rot}");
    }

    #[test]
    fn rotation_number_rejects_the_circle() {
        let family =
            CurveFamily::new(CurveKind::AbreschLanger, CurveKind::AbreschLanger.circle_constant())
                .unwrap();
        assert!(matches!(rotation_number(&family), Err(Error::CircleDegenerate)));
    }

    #[test]
    fn al_rho_half_rotation_is_inside_the_interval() {
        let family = CurveFamily::new(CurveKind::AbreschLanger, 0.5).unwrap();
        let rot = rotation_number(&family).unwrap();
        assert!(rot > 0.5 && rot < FRAC_1_SQRT_2, "rotation {rot}");
    }

    #[test]
    fn shoot_rejects_inadmissible_targets() {
        assert!(matches!(
            shoot_closed(CurveKind::AbreschLanger, 1, 1),
            Err(Error::InadmissibleRotation { .. })
        ));
        assert!(matches!(
            shoot_closed(CurveKind::AbreschLanger, 2, 4),
            Err(Error::InadmissibleParams(_))
        ));
        assert!(matches!(
            shoot_closed(CurveKind::Anciaux, 1, 5),
            Err(Error::InadmissibleRotation { .. })
        ));
    }

    #[test]
    fn shoot_al_3_5() {
        let (family, curve) = shoot_closed(CurveKind::AbreschLanger, 3, 5).unwrap();
        let rot = rotation_number(&family).unwrap();
        assert!((rot - 0.6).abs() < 1e-10, "rotation {rot}");
        assert!(curve.closure_error < 1e-6, "closure {}", curve.closure_error);
        assert!(curve.drift < 1e-9, "drift {}", curve.drift);
        assert!(curve.curvature_defect < 1e-8);
        // q-fold radial symmetry: r(t + T/q) = r(t).
        let n = 250; // divisible by q = 5
        let samples = curve.resample_periodic(n).unwrap();
        for k in 0..n {
            let shifted = (k + n / 5) % n;
            assert!((samples[k].r - samples[shifted].r).abs() < 1e-6);
        }
    }

    #[test]
    fn shoot_anciaux_1_3() {
        let (family, curve) = shoot_closed(CurveKind::Anciaux, 1, 3).unwrap();
        let rot = rotation_number(&family).unwrap();
        assert!((rot - 1.0 / 3.0).abs() < 1e-10, "rotation {rot}");
        assert!(curve.closure_error < 1e-6);
        assert!(curve.drift < 1e-9);
        assert!(curve.r_min < 2.0f64.sqrt() && curve.r_max > 2.0f64.sqrt());
    }

    #[test]
    fn rotation_routes_agree() {
        // Event-based integration and the singular-free quadrature are
        // independent computations of the same number.
        for (kind, c) in [
            (CurveKind::AbreschLanger, 0.5),
            (CurveKind::AbreschLanger, 0.35),
            (CurveKind::Anciaux, 0.3),
            (CurveKind::Anciaux, 0.042),
        ] {
            let family = CurveFamily::new(kind, c).unwrap();
            let ode = rotation_number(&family).unwrap();
            let quad = rotation_by_quadrature(&family, 4096).unwrap();
            assert!(
                (ode - quad).abs() < 1e-9,
                "{kind:?} c={c}: routes differ by {:.3e}",
                (ode - quad).abs()
            );
        }
    }

    #[test]
    fn rotation_responds_monotonically_on_a_ladder() {
        for kind in [CurveKind::AbreschLanger, CurveKind::Anciaux] {
            let ladder = rotation_ladder(kind, 8).unwrap();
            for pair in ladder.windows(2) {
                assert!(
                    pair[1].1 > pair[0].1,
                    "rotation not increasing in the constant: {ladder:?}"
                );
            }
        }
    }

    #[test]
    fn curve_csv_has_fixed_header() {
        let curve = ProfileCurve::circle(CurveKind::AbreschLanger);
        let mut buf = Vec::new();
        curve.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,x,y,r,kappa\n"));
        assert_eq!(text.lines().count(), 1 + curve.samples.len());
    }
}

