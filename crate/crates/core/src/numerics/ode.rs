//! Dormand–Prince 5(4) integrator with adaptive step size.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Step-size control for [`Dopri5`].
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub initial_step: Option<f64>,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-10, atol: 1e-300, max_steps: 1_000_000, initial_step: None }
    }
}

/// Weighted RMS norm used to accept or reject a step.
///
/// Components listed in `shared` are measured against the largest of them,
/// so oscillating pairs such as `(φ, φ')` are not judged at their zeros.
pub struct Dopri5<'a> {
    pub opts: OdeOptions,
    pub shared: &'a [usize],
}

impl<'a> Dopri5<'a> {
    pub fn new(opts: OdeOptions, shared: &'a [usize]) -> Self {
        Dopri5 { opts, shared }
    }

    fn error_norm<const N: usize>(&self, err: &[f64; N], y0: &[f64; N], y1: &[f64; N]) -> f64 {
        let shared_scale = self
            .shared
            .iter()
            .map(|&i| y0[i].abs().max(y1[i].abs()))
            .fold(0.0f64, f64::max);
        let mut acc = 0.0;
        for i in 0..N {
            let mag = if self.shared.contains(&i) { shared_scale } else { y0[i].abs().max(y1[i].abs()) };
            let sc = self.opts.atol + self.opts.rtol * mag;
            let r = err[i] / sc;
            acc += r * r;
        }
        (acc / N as f64).sqrt()
    }

    /// Integrates `y' = f(x, y)` from `x0` to `x1` (either direction).
    ///
    /// `observe` sees every accepted step and may stop early by returning `false`.
    pub fn solve<const N: usize, F, O>(&self, mut f: F, x0: f64, y0: [f64; N], x1: f64, mut observe: O) -> Result<(f64, [f64; N])>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
        O: FnMut(f64, &[f64; N]) -> bool,
    {
        let span = x1 - x0;
        if span == 0.0 {
            return Ok((x0, y0));
        }
        let dir = span.signum();
        let mut h = self.opts.initial_step.unwrap_or(span.abs() * 1e-3).min(span.abs()) * dir;
        let (mut x, mut y) = (x0, y0);
        let mut k = [[0.0; N]; 7];
        k[0] = f(x, &y);
        for _ in 0..self.opts.max_steps {
            if (x1 - x) * dir <= 0.0 {
                return Ok((x, y));
            }
            if (x + h - x1) * dir > 0.0 {
                h = x1 - x;
            }
            for s in 1..7 {
                let mut ys = y;
                for i in 0..N {
                    let mut acc = 0.0;
                    for (j, kj) in k.iter().enumerate().take(s) {
                        acc += A[s][j] * kj[i];
                    }
                    ys[i] += h * acc;
                }
                k[s] = f(x + C[s] * h, &ys);
            }
            let mut y_new = y;
            let mut err = [0.0; N];
            for i in 0..N {
                let mut acc = 0.0;
                let mut e = 0.0;
                for s in 0..6 {
                    acc += A[6][s] * k[s][i];
                }
                for s in 0..7 {
                    e += E[s] * k[s][i];
                }
                y_new[i] += h * acc;
                err[i] = h * e;
            }
            let en = self.error_norm(&err, &y, &y_new);
            if !en.is_finite() {
                h *= 0.2;
                if h.abs() < 1e-14 * x.abs().max(1.0) {
                    return Err(Error::NoConvergence(format!("ODE step underflow at x={x}")));
                }
                continue;
            }
            if en <= 1.0 {
                x = if (x + h - x1) * dir >= 0.0 { x1 } else { x + h };
                y = y_new;
                k[0] = k[6];
                if !observe(x, &y) {
                    return Ok((x, y));
                }
            }
            let factor = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
            h *= if en <= 1.0 { factor } else { factor.min(1.0) };
            if h.abs() < 1e-14 * x.abs().max(1.0) {
                return Err(Error::NoConvergence(format!("ODE step underflow at x={x}")));
            }
        }
        Err(Error::NoConvergence(format!("ODE step budget exhausted at x={x}")))
    }
}
