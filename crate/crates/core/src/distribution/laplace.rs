//! Laplace transform of the scaled density and the free propagator.

use crate::error::{Error, Result};
use crate::numerics::quad::{integrate, integrate_to_infinity, QuadOptions};
use crate::params::ExcursionParams;
use crate::specfun::{bessel_i_scaled, gamma, gamma_q};
use crate::spectrum::{dk_asymptotic, SpectralData};

/// Default bound on the estimated error of the continuum tail.
pub const TAIL_TOL: f64 = 1e-6;

pub(crate) fn check_spectrum(params: &ExcursionParams, spectral: &SpectralData) -> Result<()> {
    let (p, q) = (params, &spectral.params);
    if p.mode != q.mode || (p.index() - q.index()).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "spectrum computed for index {} ({}), requested {} ({})",
            q.index(),
            q.mode,
            p.index(),
            p.mode
        )));
    }
    if spectral.lambdas.is_empty() || spectral.lambdas.len() != spectral.dks.len() {
        return Err(Error::InvalidParameter("empty or inconsistent spectrum".into()));
    }
    Ok(())
}

/// `2^{2a+1} Γ(a+1)`, the prefactor of every eigen-sum.
pub(crate) fn weight_prefactor(a: f64) -> f64 {
    2f64.powf(2.0 * a + 1.0) * gamma(a + 1.0).unwrap_or(f64::NAN)
}

/// Relative deviation of the last computed `d_k²` from its asymptotic law.
pub(crate) fn asymptotic_mismatch(spectral: &SpectralData) -> f64 {
    let k = spectral.lambdas.len() - 1;
    let d = spectral.dks[k];
    let da = dk_asymptotic(&spectral.params, spectral.lambdas[k]);
    (d * d / (da * da) - 1.0).abs()
}

/// `Γ(s, x)` for real `s` and `x > 0`.
fn upper_gamma(s: f64, x: f64) -> Result<f64> {
    if s > 0.0 {
        return Ok(gamma_q(s, x)? * gamma(s)?);
    }
    // x^{s-1} e^{-x} ∫ (1 + w/x)^{s-1} e^{-w} dw
    let opts = QuadOptions { abs_tol: 0.0, rel_tol: 1e-8, max_intervals: 400 };
    let f = |w: f64| (1.0 + w / x).powf(s - 1.0) * (-w).exp();
    let edge = x.min(1.0);
    let head = integrate(f, &[0.0, 0.1 * edge, edge], &opts)?;
    let tail = integrate_to_infinity(f, edge, &opts)?;
    Ok(x.powf(s - 1.0) * (-x).exp() * (head.value + tail.value))
}

/// `P̃(ŝ)` together with an estimate of the error of the continuum tail.
///
/// Fails with [`Error::InsufficientSpectrum`] when that estimate exceeds `tol`.
pub fn laplace_pdf_with_tol(params: &ExcursionParams, spectral: &SpectralData, s_hat: f64, tol: f64) -> Result<(f64, f64)> {
    check_spectrum(params, spectral)?;
    if !(s_hat >= 0.0) || !s_hat.is_finite() {
        return Err(Error::Domain(format!("Laplace variable must be finite and >= 0, got {s_hat}")));
    }
    if s_hat == 0.0 {
        return Ok((1.0, 0.0));
    }
    let a = params.index();
    let t = s_hat.powf(2.0 / 3.0);
    let sum: f64 = spectral.lambdas.iter().zip(&spectral.dks).map(|(l, d)| d * d * (-l * t).exp()).sum();
    let edge = spectral.continuum_edge();
    let x = edge * t;
    let value = weight_prefactor(a) * t.powf(a + 1.0) * sum + gamma_q(a + 1.0, x)?;
    // discreteness of the first omitted levels is worth about a quarter of the
    // last retained term; the rest comes from d_k deviating from its law
    let k = spectral.lambdas.len() - 1;
    let last = weight_prefactor(a) * t.powf(a + 1.0) * spectral.dks[k].powi(2) * (-spectral.lambdas[k] * t).exp();
    let density = 2.0 * asymptotic_mismatch(spectral) * x.powf(1.5) * upper_gamma(a - 0.5, x)? / gamma(a + 1.0)?;
    let err = last + density;
    if err > tol {
        return Err(Error::InsufficientSpectrum(format!(
            "continuum tail error {err:.2e} at s = {s_hat} exceeds {tol:.1e} with K = {}",
            spectral.lambdas.len()
        )));
    }
    Ok((value, err))
}

/// `P̃(ŝ) = 2^{2a+1} Γ(a+1) ŝ^{ν+2/3} Σ d_k² e^{-λ_k ŝ^{2/3}}`, with `k ≥ K`
/// replaced by the incomplete-Γ continuum.
pub fn laplace_pdf(params: &ExcursionParams, spectral: &SpectralData, s_hat: f64) -> Result<f64> {
    laplace_pdf_with_tol(params, spectral, s_hat, TAIL_TOL).map(|v| v.0)
}

/// `-dP̃/dŝ` at `ŝ = 0`, which equals the mean of `Â`, with an error estimate.
///
/// `(1 - P̃(ŝ))/ŝ` is sampled at 12 equispaced points of `[0.35, 1]` and
/// extrapolated to `ŝ = 0` by Neville's scheme; the error is the change when
/// the nearest point is dropped.
pub fn mean_from_laplace(params: &ExcursionParams, spectral: &SpectralData) -> Result<(f64, f64)> {
    const N: usize = 12;
    let hs: Vec<f64> = (0..N).map(|i| 0.35 + 0.65 * i as f64 / (N - 1) as f64).collect();
    let ds: Vec<f64> = hs.iter().map(|&h| laplace_pdf(params, spectral, h).map(|p| (1.0 - p) / h)).collect::<Result<_>>()?;
    let full = neville_at_zero(&hs, &ds);
    let fewer = neville_at_zero(&hs[1..], &ds[1..]);
    Ok((full, (full - fewer).abs()))
}

fn neville_at_zero(x: &[f64], y: &[f64]) -> f64 {
    let mut p = y.to_vec();
    for m in 1..x.len() {
        for i in 0..x.len() - m {
            p[i] = (x[i + m] * p[i] - x[i] * p[i + 1]) / (x[i + m] - x[i]);
        }
    }
    p[0]
}

/// Density of reaching `x` at time `T` from `x0` without touching the origin.
pub fn g0_propagator(x: f64, x0: f64, t: f64, params: &ExcursionParams) -> Result<f64> {
    if !(x > 0.0 && x0 > 0.0 && t > 0.0) {
        return Err(Error::Domain(format!("propagator needs x, x0, T > 0, got ({x}, {x0}, {t})")));
    }
    let dt2 = 2.0 * params.d * t;
    let z = x * x0 / dt2;
    let i = bessel_i_scaled(params.alpha().abs(), z)?;
    let gauss = (-(x - x0) * (x - x0) / (2.0 * dt2)).exp();
    Ok((x0 / x).powf(0.5 * params.u0) * (x * x0).sqrt() / dt2 * gauss * i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn upper_gamma_branches() {
        // Γ(0, x) = E1(x); E1(1) = 0.219383934395520
        assert!((upper_gamma(0.0, 1.0).unwrap() - 0.219_383_934_395_520_3).abs() < 1e-8);
        // Γ(-1/2, x) = 2 e^{-x}/√x - 2 Γ(1/2, x)
        let x: f64 = 0.7;
        let want = 2.0 * (-x).exp() / x.sqrt() - 2.0 * PI.sqrt() * gamma_q(0.5, x).unwrap();
        assert!((upper_gamma(-0.5, x).unwrap() - want).abs() < 1e-8 * want);
    }

    #[test]
    fn neville_is_exact_on_polynomials() {
        let x = [0.3, 0.5, 0.9, 1.4];
        let y: Vec<f64> = x.iter().map(|t| 2.0 - t + 0.5 * t * t * t).collect();
        assert!((neville_at_zero(&x, &y) - 2.0).abs() < 1e-13);
    }

    #[test]
    fn free_propagator_is_image_kernel() {
        let p = ExcursionParams::new(0.0, 0.7, 1.0, crate::params::BoundaryMode::Absorbing).unwrap();
        let (x, x0, t) = (0.9, 1.3, 0.4);
        let dt4 = 4.0 * p.d * t;
        let want = ((-(x - x0) * (x - x0) / dt4).exp() - (-(x + x0) * (x + x0) / dt4).exp()) / (PI * dt4).sqrt();
        assert!((g0_propagator(x, x0, t, &p).unwrap() - want).abs() < 1e-13);
    }
}
