//! Embedded Dormand-Prince 5(4) integrator with step control.
//!
//! The driver advances one accepted step at a time so callers can watch event
//! functions, and can be forced to land exactly on requested output times.
//! Within an accepted step, cubic Hermite interpolation on the stored
//! endpoint states provides the dense output used to bracket events; callers
//! polish event times afterwards with tiny forced steps, so the final event
//! location is as accurate as the trajectory itself.

use crate::error::{Error, Result};

/// Right-hand side of an autonomous first-order system.
pub trait OdeSystem<const N: usize> {
    fn rhs(&self, y: &[f64; N]) -> [f64; N];
}

/// One accepted step with endpoint derivatives, enough for Hermite dense output.
#[derive(Debug, Clone, Copy)]
pub struct Step<const N: usize> {
    pub t0: f64,
    pub y0: [f64; N],
    pub f0: [f64; N],
    pub t1: f64,
    pub y1: [f64; N],
    pub f1: [f64; N],
}

impl<const N: usize> Step<N> {
    /// Cubic Hermite interpolant at `t` in `[t0, t1]`.
    #[allow(clippy::needless_range_loop)]
    pub fn interpolate(&self, t: f64) -> [f64; N] {
        let h = self.t1 - self.t0;
        let s = (t - self.t0) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        let mut out = [0.0; N];
        for i in 0..N {
            out[i] = h00 * self.y0[i] + h10 * h * self.f0[i] + h01 * self.y1[i] + h11 * h * self.f1[i];
        }
        out
    }
}

/// Step-size and tolerance options.
#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub rtol: f64,
    pub atol: f64,
    pub h_initial: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { rtol: 1e-11, atol: 1e-12, h_initial: 1e-3, h_max: 0.25, max_steps: 20_000_000 }
    }
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// Fifth-order weights coincide with the last A row (FSAL).
const B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B_HAT: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Post-step state correction hook.
pub type Projection<'a, const N: usize> = &'a dyn Fn(&mut [f64; N]);

/// Stateful adaptive driver.
pub struct Driver<'a, S: OdeSystem<N>, const N: usize> {
    sys: &'a S,
    pub t: f64,
    pub y: [f64; N],
    pub f: [f64; N],
    h: f64,
    opts: Options,
    /// Optional post-step projection onto an invariant manifold.
    project: Option<Projection<'a, N>>,
}

impl<'a, S: OdeSystem<N>, const N: usize> Driver<'a, S, N> {
    pub fn new(sys: &'a S, t0: f64, y0: [f64; N], opts: Options) -> Self {
        let f = sys.rhs(&y0);
        Driver { sys, t: t0, y: y0, f, h: opts.h_initial, opts, project: None }
    }

    pub fn with_projection(mut self, project: Projection<'a, N>) -> Self {
        self.project = Some(project);
        self
    }

    pub fn set_state(&mut self, t: f64, y: [f64; N]) {
        self.t = t;
        self.y = y;
        self.f = self.sys.rhs(&y);
    }

    fn attempt(&self, h: f64) -> ([f64; N], [f64; N], f64) {
        let mut k = [[0.0; N]; 7];
        k[0] = self.f;
        for s in 1..7 {
            let mut ys = self.y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..N {
                        ys[i] += h * a * kj[i];
                    }
                }
            }
            let _ = C; // stage times unused: the system is autonomous
            k[s] = self.sys.rhs(&ys);
        }
        let mut y1 = self.y;
        let mut err = [0.0; N];
        for (j, kj) in k.iter().enumerate() {
            for i in 0..N {
                y1[i] += h * B[j] * kj[i];
                err[i] += h * (B[j] - B_HAT[j]) * kj[i];
            }
        }
        let mut norm = 0.0;
        for i in 0..N {
            let scale = self.opts.atol + self.opts.rtol * self.y[i].abs().max(y1[i].abs());
            let e = err[i] / scale;
            norm += e * e;
        }
        (y1, k[6], (norm / N as f64).sqrt())
    }

    /// Take one accepted adaptive step, optionally capped at `h_cap`.
    fn step_capped(&mut self, h_cap: Option<f64>) -> Result<Step<N>> {
        let mut h = self.h.min(self.opts.h_max);
        if let Some(cap) = h_cap {
            h = h.min(cap);
        }
        for _ in 0..60 {
            let (y1, f1, err) = self.attempt(h);
            if err <= 1.0 && y1.iter().all(|x| x.is_finite()) {
                let step = Step { t0: self.t, y0: self.y, f0: self.f, t1: self.t + h, y1, f1 };
                self.t += h;
                self.y = y1;
                self.f = f1;
                if let Some(project) = self.project {
                    project(&mut self.y);
                    self.f = self.sys.rhs(&self.y);
                }
                // PI-free elementary controller, order 5.
                let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                self.h = (h * factor).min(self.opts.h_max);
                return Ok(step);
            }
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            if h < 1e-14 {
                return Err(Error::IntegratorFailure("step size underflow".into()));
            }
        }
        Err(Error::IntegratorFailure("too many rejected steps".into()))
    }

    /// One accepted adaptive step.
    pub fn advance(&mut self) -> Result<Step<N>> {
        self.step_capped(None)
    }

    /// Integrate to exactly `t_target` (which must be ahead of `t`).
    pub fn advance_to(&mut self, t_target: f64) -> Result<()> {
        let mut guard = 0usize;
        while self.t < t_target {
            let remaining = t_target - self.t;
            if remaining <= 1e-15 * t_target.abs().max(1.0) {
                break;
            }
            self.step_capped(Some(remaining))?;
            guard += 1;
            if guard > self.opts.max_steps {
                return Err(Error::IntegratorFailure("step budget exhausted".into()));
            }
        }
        Ok(())
    }

    /// One forced step of exactly `h` (no error control); for tiny polish
    /// steps where the local error h^5 is far below rounding.
    pub fn force_step(&mut self, h: f64) {
        if h == 0.0 {
            return;
        }
        let (y1, f1, _) = self.attempt(h);
        self.t += h;
        self.y = y1;
        self.f = f1;
    }
}
