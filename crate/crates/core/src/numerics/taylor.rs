//! High-order Taylor stepping for `φ'' = q(x) φ` with `∫φ²` carried along.
//!
//! `q` is supplied through its Taylor coefficients at the current point, so
//! each step costs `O(N²)` flops and may span a sizeable part of a wavelength.

use crate::error::{Error, Result};

/// Local Taylor data of the potential.
pub trait Potential {
    /// Writes the first `out.len()` Taylor coefficients of `q` about `x`.
    fn coefficients(&self, x: f64, out: &mut [f64]);
    /// Upper bound of `max(-q, 0)` on the interval between `x` and `x + h`.
    fn max_kinetic(&self, x: f64, h: f64) -> f64;
    /// Distance from `x` to the nearest singularity of `q`.
    fn radius(&self, x: f64) -> f64;
}

#[derive(Debug, Clone, Copy)]
pub struct TaylorOptions {
    pub order: usize,
    pub rtol: f64,
    pub max_steps: usize,
}

impl Default for TaylorOptions {
    fn default() -> Self {
        TaylorOptions { order: 30, rtol: 1e-12, max_steps: 1_000_000 }
    }
}

/// State `[φ, φ', ∫φ²]` after integrating from `x0` to `x1`, and the number of
/// sign changes of `φ` seen on the way.
pub fn integrate<P: Potential>(pot: &P, x0: f64, y0: [f64; 3], x1: f64, opts: &TaylorOptions) -> Result<([f64; 3], usize)> {
    let n = opts.order.max(8);
    let dir = (x1 - x0).signum();
    let mut q = vec![0.0; n];
    let mut c = vec![0.0; n + 1];
    let (mut x, mut y) = (x0, y0);
    let mut nodes = 0;
    let mut sign = y[0].signum();
    for _ in 0..opts.max_steps {
        if (x1 - x) * dir <= 0.0 {
            return Ok((y, nodes));
        }
        pot.coefficients(x, &mut q[..n - 1]);
        c[0] = y[0];
        c[1] = y[1];
        for m in 0..n - 1 {
            let mut acc = 0.0;
            for j in 0..=m {
                acc += q[j] * c[m - j];
            }
            c[m + 2] = acc / ((m + 1) * (m + 2)) as f64;
        }
        let local = pot.max_kinetic(x, 0.0).sqrt().max(1.0);
        let tol = opts.rtol * (y[0].abs() + y[1].abs() / local);
        let mut h = (0.5 * pot.radius(x)).min((x1 - x).abs());
        for j in [n - 1, n] {
            if c[j] != 0.0 {
                h = h.min(0.7 * (tol / c[j].abs()).powf(1.0 / j as f64));
            }
        }
        // at most one node per step
        let omega = pot.max_kinetic(x, dir * h).sqrt();
        if omega > 0.0 {
            h = h.min(2.5 / omega);
        }
        if !(h > 1e-14 * x.abs().max(1.0)) {
            return Err(Error::NoConvergence(format!("Taylor step underflow at x={x}")));
        }
        let s = dir * h;
        let (mut v, mut dv) = (0.0, 0.0);
        for j in (0..=n).rev() {
            v = v * s + c[j];
        }
        for j in (1..=n).rev() {
            dv = dv * s + j as f64 * c[j];
        }
        let mut sq = 0.0;
        for m in (0..=n).rev() {
            let mut acc = 0.0;
            for j in 0..=m {
                acc += c[j] * c[m - j];
            }
            sq = sq * s + acc / (m + 1) as f64;
        }
        y = [v, dv, y[2] + sq * s];
        x = if (x1 - x).abs() <= h { x1 } else { x + s };
        let sg = y[0].signum();
        if sg != 0.0 && sg != sign {
            if sign != 0.0 {
                nodes += 1;
            }
            sign = sg;
        }
    }
    Err(Error::NoConvergence(format!("Taylor step budget exhausted at x={x}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `q = -1`: harmonic oscillator.
    struct Flat;

    impl Potential for Flat {
        fn coefficients(&self, _x: f64, out: &mut [f64]) {
            out.fill(0.0);
            out[0] = -1.0;
        }
        fn max_kinetic(&self, _x: f64, _h: f64) -> f64 {
            1.0
        }
        fn radius(&self, _x: f64) -> f64 {
            f64::INFINITY
        }
    }

    #[test]
    fn harmonic_oscillator_and_norm() {
        let (y, nodes) = integrate(&Flat, 0.0, [0.0, 1.0, 0.0], 10.0, &TaylorOptions::default()).unwrap();
        assert!((y[0] - 10f64.sin()).abs() < 1e-11);
        assert!((y[1] - 10f64.cos()).abs() < 1e-11);
        // ∫ sin² = x/2 - sin(2x)/4
        assert!((y[2] - (5.0 - 20f64.sin() / 4.0)).abs() < 1e-11);
        assert_eq!(nodes, 3);
    }

    #[test]
    fn backward() {
        let (y, nodes) = integrate(&Flat, 10.0, [10f64.sin(), 10f64.cos(), 0.0], 0.5, &TaylorOptions::default()).unwrap();
        assert!((y[0] - 0.5f64.sin()).abs() < 1e-11 && (y[1] - 0.5f64.cos()).abs() < 1e-11);
        let primitive = |x: f64| x / 2.0 - (2.0 * x).sin() / 4.0;
        assert!((y[2] + primitive(10.0) - primitive(0.5)).abs() < 1e-11);
        assert_eq!(nodes, 3);
    }
}
