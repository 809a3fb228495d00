//! Eigenvalues `λ_k` and origin coefficients `d_k` of
//! `-φ'' + (c/x² + x) φ = λ φ`, `φ ~ d x^{1/2+a}` at the origin, `∫φ² = 1`.
//!
//! Each trial `λ` is shot outward from a Frobenius start and inward from the
//! decaying WKB branch; the two meet at `x_m = max(1, λ/2)` where their
//! normalized Wronskian `sin(θ_L - θ_R)` changes sign exactly at eigenvalues.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::taylor::{self, Potential, TaylorOptions};
use crate::numerics::roots::brent;
use crate::params::{BoundaryMode, ExcursionParams};
use crate::specfun::gamma;

/// Left end of the numerical integration; `[0, X_MIN]` is handled by the series.
pub const X_MIN: f64 = 0.25;
const FROBENIUS_TERMS: usize = 120;
const OUTER_MARGIN: f64 = 12.0;

/// Computed spectrum together with the settings that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    pub lambdas: Vec<f64>,
    pub dks: Vec<f64>,
    pub k: usize,
    pub tol: f64,
    pub params: ExcursionParams,
    /// Eigenvalue index from which sums switch to the continuum tail.
    pub tail_from: usize,
}

impl SpectralData {
    /// `Λ`, the lower limit of the continuum that replaces `k ≥ K`.
    ///
    /// Chosen so the integrated asymptotic weight below `Λ` equals
    /// `Σ_{k<K} d_k²`, which removes the spurious `t^0` term from small-`t`
    /// expansions of `Σ d_k² e^{-λ_k t}`.
    pub fn continuum_edge(&self) -> f64 {
        let a = self.params.index();
        let w: f64 = self.dks.iter().map(|d| d * d).sum();
        let g1 = gamma(a + 1.0).unwrap_or(f64::NAN);
        let g2 = (a + 1.0) * g1;
        (2f64.powf(2.0 * a + 1.0) * g1 * g2 * w).powf(1.0 / (a + 1.0))
    }
}

/// Frobenius series `x^{1/2+a} Σ c_n x^n` about the origin with `c_0 = 1`.
#[derive(Debug, Clone)]
struct Frobenius {
    p: f64,
    c: Vec<f64>,
}

impl Frobenius {
    fn new(a: f64, lambda: f64) -> Self {
        let mut c = vec![0.0; FROBENIUS_TERMS];
        c[0] = 1.0;
        for n in 2..FROBENIUS_TERMS {
            let prev3 = if n >= 3 { c[n - 3] } else { 0.0 };
            let den = n as f64 * (n as f64 + 2.0 * a);
            c[n] = (prev3 - lambda * c[n - 2]) / den;
        }
        Frobenius { p: 0.5 + a, c }
    }

    /// Sign changes of the series on `(0, x]`.
    fn nodes_below(&self, x: f64) -> usize {
        let mut nodes = 0;
        let mut prev = 1.0;
        for i in 1..=64 {
            let v: f64 = self.c.iter().rev().fold(0.0, |acc, &cn| acc * (x * i as f64 / 64.0) + cn);
            if v != 0.0 && v.signum() != prev {
                nodes += 1;
                prev = v.signum();
            }
        }
        nodes
    }

    /// `(φ, φ', ∫_0^x φ²)`.
    fn eval(&self, x: f64) -> (f64, f64, f64) {
        let mut v = 0.0;
        let mut dv = 0.0;
        let mut xn = 1.0;
        for (n, &cn) in self.c.iter().enumerate() {
            v += cn * xn;
            dv += cn * (self.p + n as f64) * xn;
            xn *= x;
        }
        let mut sq = vec![0.0; 2 * self.c.len()];
        for (m, &cm) in self.c.iter().enumerate() {
            if cm == 0.0 {
                continue;
            }
            for (n, &cn) in self.c.iter().enumerate() {
                sq[m + n] += cm * cn;
            }
        }
        let mut integral = 0.0;
        let mut xj = 1.0;
        for (j, &s) in sq.iter().enumerate() {
            integral += s * xj / (2.0 * self.p + j as f64 + 1.0);
            xj *= x;
        }
        let xp = x.powf(self.p);
        (v * xp, (dv / x) * xp, integral * xp * xp * x)
    }
}

/// `q(x) = c/x² + x - λ`.
struct Well {
    c: f64,
    lambda: f64,
}

impl Potential for Well {
    fn coefficients(&self, x: f64, out: &mut [f64]) {
        let inv = 1.0 / x;
        let mut p = self.c * inv * inv;
        for (j, o) in out.iter_mut().enumerate() {
            *o = (j + 1) as f64 * p;
            p *= -inv;
        }
        out[0] += x - self.lambda;
        if out.len() > 1 {
            out[1] += 1.0;
        }
    }

    fn max_kinetic(&self, x: f64, h: f64) -> f64 {
        let (lo, hi) = if h < 0.0 { (x + h, x) } else { (x, x + h) };
        let at = if self.c > 0.0 { (2.0 * self.c).cbrt().clamp(lo, hi) } else { lo };
        (self.lambda - at - self.c / (at * at)).max(0.0)
    }

    fn radius(&self, x: f64) -> f64 {
        if self.c == 0.0 {
            f64::INFINITY
        } else {
            x.abs()
        }
    }
}

/// Shooting machinery for index `a` (which fixes `c = a² - 1/4`).
#[derive(Debug, Clone, Copy)]
pub struct Shooter {
    a: f64,
    c: f64,
    opts: TaylorOptions,
}

struct Branch {
    y: [f64; 3],
    nodes: usize,
}

struct Shot {
    inner_nodes: usize,
    left: Branch,
    right: Branch,
    x_max: f64,
}

impl Shooter {
    pub fn new(a: f64, rtol: f64) -> Self {
        Shooter { a, c: a * a - 0.25, opts: TaylorOptions { rtol, ..Default::default() } }
    }

    pub fn for_params(params: &ExcursionParams, tol: f64) -> Self {
        Self::new(params.index(), tol / 10.0)
    }

    fn matching_point(lambda: f64) -> f64 {
        (0.5 * lambda).max(1.0)
    }

    fn integrate(&self, lambda: f64, x0: f64, y0: [f64; 3], x1: f64) -> Result<Branch> {
        let well = Well { c: self.c, lambda };
        let (y, nodes) = taylor::integrate(&well, x0, y0, x1, &self.opts)?;
        Ok(Branch { y, nodes })
    }

    fn shoot(&self, lambda: f64) -> Result<Shot> {
        let xm = Self::matching_point(lambda);
        let series = Frobenius::new(self.a, lambda);
        let (v, dv, i0) = series.eval(X_MIN);
        let inner_nodes = series.nodes_below(X_MIN);
        let left = self.integrate(lambda, X_MIN, [v, dv, i0], xm)?;
        let x_max = lambda.max(0.0) + OUTER_MARGIN;
        let q = (self.c / (x_max * x_max) + x_max - lambda).sqrt();
        let dlog = -q - (1.0 - 2.0 * self.c / x_max.powi(3)) / (4.0 * q * q);
        let right = self.integrate(lambda, x_max, [1.0, dlog, 0.0], xm)?;
        Ok(Shot { inner_nodes, left, right, x_max })
    }

    /// Normalized Wronskian of the two branches; zero exactly at eigenvalues.
    pub fn mismatch(&self, lambda: f64) -> Result<f64> {
        let s = self.shoot(lambda)?;
        let (l, r) = (&s.left.y, &s.right.y);
        let w = l[0] * r[1] - l[1] * r[0];
        Ok(w / (l[0].hypot(l[1]) * r[0].hypot(r[1])))
    }

    /// `(d, nodes)` of the normalized eigenfunction at an eigenvalue.
    fn normalize(&self, lambda: f64) -> Result<(f64, usize)> {
        let s = self.shoot(lambda)?;
        let (l, r) = (&s.left.y, &s.right.y);
        let scale = (l[0] * r[0] + l[1] * r[1]) / (r[0] * r[0] + r[1] * r[1]);
        // decaying tail beyond x_max, φ ≈ e^{-q (x - x_max)}
        let q = (s.x_max - lambda).max(1.0).sqrt();
        let outer = 1.0 / (2.0 * q);
        let norm = l[2] + scale * scale * (r[2].abs() + outer);
        let nodes = s.inner_nodes + s.left.nodes + s.right.nodes;
        Ok((1.0 / norm.sqrt(), nodes))
    }

    /// Outward solution with `φ ~ x^{1/2+a}` at trial `λ`, evaluated at `x`.
    pub fn outward(&self, lambda: f64, x: f64) -> Result<f64> {
        let series = Frobenius::new(self.a, lambda);
        if x <= X_MIN {
            return Ok(series.eval(x).0);
        }
        let (v, dv, i0) = series.eval(X_MIN);
        Ok(self.integrate(lambda, X_MIN, [v, dv, i0], x)?.y[0])
    }
}

fn validate(params: &ExcursionParams, k: usize, tol: f64) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("need at least one eigenvalue".into()));
    }
    if !(1e-12..=1e-4).contains(&tol) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} outside [1e-12, 1e-4]")));
    }
    if params.mode == BoundaryMode::Continued && !(params.u0 > -3.0 && params.u0 < -1.0) {
        return Err(Error::InvalidParameter(format!("continued mode needs -3 < U0 < -1, got {}", params.u0)));
    }
    Ok(())
}

/// Scan nodes from `start` up to `stop` with spacing `frac·π/√λ`.
fn scan_grid(start: f64, stop: f64, frac: f64, extra: Option<f64>) -> Vec<f64> {
    let mut grid = vec![start];
    let mut lam = start;
    while lam < stop {
        lam += frac * PI / lam.max(1.0).sqrt();
        grid.push(lam);
    }
    if let Some(e) = extra {
        if e > start && e < stop {
            grid.push(e);
            grid.sort_by(f64::total_cmp);
        }
    }
    grid
}

/// First `k` eigenpairs for `params` with eigenvalue tolerance `tol`.
pub fn solve_spectrum(params: &ExcursionParams, k: usize, tol: f64) -> Result<SpectralData> {
    validate(params, k, tol)?;
    let hint = match params.mode {
        BoundaryMode::Continued => Some(crate::levy_limit::lambda0_perturbative(params.u0)?),
        BoundaryMode::Absorbing => None,
    };
    let (lambdas, dks) = solve_index(params.index(), k, tol, hint)?;
    Ok(SpectralData { lambdas, dks, k, tol, params: *params, tail_from: k })
}

/// First `k` eigenpairs `(λ, d)` for index `a`; `hint` is added to the scan grid.
pub(crate) fn solve_index(a: f64, k: usize, tol: f64, hint: Option<f64>) -> Result<(Vec<f64>, Vec<f64>)> {
    let shooter = Shooter::new(a, tol / 10.0);
    let start = -1.0;
    let mut frac = 0.25;
    for _ in 0..4 {
        let mut stop = asymptotic_eigenvalue(a, k) + 2.0;
        let roots = loop {
            let grid = scan_grid(start, stop, frac, hint);
            let values: Vec<f64> = grid.par_iter().map(|&l| shooter.mismatch(l)).collect::<Result<_>>()?;
            let brackets: Vec<(f64, f64)> = grid
                .windows(2)
                .zip(values.windows(2))
                .filter(|(_, v)| v[0] == 0.0 || v[0].signum() != v[1].signum())
                .map(|(g, _)| (g[0], g[1]))
                .collect();
            if brackets.len() >= k {
                break brackets.into_iter().take(k).collect::<Vec<_>>();
            }
            if stop > 1e5 {
                return Err(Error::NoConvergence(format!("found {} of {k} eigenvalues below {stop}", brackets.len())));
            }
            stop = stop * 1.5 + 5.0;
        };
        let pairs: Vec<(f64, f64, usize)> = roots
            .par_iter()
            .map(|&(lo, hi)| {
                let xtol = 0.1 * tol * hi.abs().max(1.0);
                let lam = brent(|l| shooter.mismatch(l), lo, hi, xtol, 200)?;
                let (d, nodes) = shooter.normalize(lam)?;
                Ok((lam, d, nodes))
            })
            .collect::<Result<_>>()?;
        if pairs.iter().enumerate().all(|(i, p)| p.2 == i) {
            return Ok((pairs.iter().map(|p| p.0).collect(), pairs.iter().map(|p| p.1).collect()));
        }
        frac *= 0.5;
    }
    Err(Error::NoConvergence("node counts inconsistent with eigenvalue ordering".into()))
}

fn asymptotic_eigenvalue(a: f64, k: usize) -> f64 {
    (1.5 * PI * (k as f64 + 0.5 * (a + 1.0))).powf(2.0 / 3.0)
}

/// `[(3π/2)(k + (a+1)/2)]^{2/3}`, the large-`k` eigenvalue law.
pub fn lambda_asymptotic(params: &ExcursionParams, k: usize) -> f64 {
    asymptotic_eigenvalue(params.index(), k)
}

/// `2^{-a-1/2} √π λ^{(2a-1)/4} / Γ(1+a)`, the large-`k` law for `d_k`.
pub fn dk_asymptotic(params: &ExcursionParams, lambda_k: f64) -> f64 {
    let a = params.index();
    2f64.powf(-a - 0.5) * PI.sqrt() * lambda_k.powf((2.0 * a - 1.0) / 4.0) * gamma::rgamma(1.0 + a)
}

/// Outward shooting solution at trial `λ`, normalized to `φ ~ x^{1/2+a}`.
pub fn eigenfunction_eval(params: &ExcursionParams, lambda: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("eigenfunction needs x > 0, got {x}")));
    }
    Shooter::for_params(params, 1e-11).outward(lambda, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{airy_ai, airy_zero};

    #[test]
    fn frobenius_coefficients() {
        // c_2 = -λ/(2(2+2a)), c_3 = 1/(3(3+2a))
        let f = Frobenius::new(0.5, 2.0);
        assert!((f.c[2] + 2.0 / (2.0 * 3.0)).abs() < 1e-15);
        assert!((f.c[3] - 1.0 / (3.0 * 4.0)).abs() < 1e-15);
    }

    #[test]
    fn frobenius_integral_is_consistent() {
        let f = Frobenius::new(0.3, 3.0);
        let h = 1e-5;
        let (v, _, _) = f.eval(0.2);
        let (_, _, i1) = f.eval(0.2 + h);
        let (_, _, i0) = f.eval(0.2 - h);
        assert!(((i1 - i0) / (2.0 * h) - v * v).abs() < 1e-8);
    }

    #[test]
    fn airy_case() {
        let p = ExcursionParams::absorbing(0.0).unwrap();
        let s = solve_spectrum(&p, 4, 1e-10).unwrap();
        for (k, (l, d)) in s.lambdas.iter().zip(&s.dks).enumerate() {
            assert!((l - airy_zero(k)).abs() < 1e-8, "k={k}: {l}");
            assert!((d * d - 1.0).abs() < 1e-6, "k={k}: {d}");
        }
    }

    #[test]
    fn outward_solution_is_airy() {
        let p = ExcursionParams::absorbing(0.0).unwrap();
        let l = airy_zero(0);
        let r = eigenfunction_eval(&p, l, 5.0).unwrap() / eigenfunction_eval(&p, l, 3.0).unwrap();
        assert!((r - airy_ai(5.0 - l) / airy_ai(3.0 - l)).abs() < 1e-6 * r.abs());
    }

    #[test]
    fn rejects_bad_requests() {
        let p = ExcursionParams::absorbing(1.0).unwrap();
        assert!(solve_spectrum(&p, 0, 1e-8).is_err());
        assert!(solve_spectrum(&p, 3, 1e-2).is_err());
    }
}
