//! Closed forms for `|α| = 1/2`, where the spectrum is the Airy zeros.

use std::f64::consts::PI;

use super::laplace::check_spectrum;
use crate::error::{Error, Result};
use crate::params::ExcursionParams;
use crate::specfun::{airy, airy_zero, kummer_u};
use crate::spectrum::SpectralData;

const MIN_TERMS: usize = 5;

/// Both closed forms at `Â`: `(Kummer-U form, Airy-function form, Σ|terms|)`.
///
/// The last entry scales the rounding error of the two sums.
///
/// Kummer: `2^{10/3} 3^{-3/2} Â^{-10/3} Σ λ² e^{-z} U(-5/6, 4/3, z)` with
/// `z = 4λ³/(27Â²)`. Airy: `12√π Σ ζ^{5/2} λ^{-3} e^{-2ζ^{3/2}/3}
/// [(8ζ^{3/2}-7) Ai(ζ) - (8ζ^{3/2}-5) Ai'(ζ)/√ζ]` with `ζ = λ²(3Â)^{-4/3}`.
pub fn airy_forms(params: &ExcursionParams, spectral: &SpectralData, a_hat: f64) -> Result<(f64, f64, f64)> {
    check_spectrum(params, spectral)?;
    if (params.index().abs() - 0.5).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "Airy closed form needs |α| = 1/2 (U0 = 0 or -2), got U0 = {}",
            params.u0
        )));
    }
    if !(a_hat > 0.0) || !a_hat.is_finite() {
        return Err(Error::Domain(format!("scaled area must be positive, got {a_hat}")));
    }
    let pref = 2f64.powf(10.0 / 3.0) / (3f64.powf(1.5) * a_hat.powf(10.0 / 3.0));
    let scale = (3.0 * a_hat).powf(-4.0 / 3.0);
    let (mut kummer, mut airy_sum, mut magnitude) = (0.0, 0.0, 0.0);
    // the levels are the Airy zeros themselves; the solved ones only bound the sum
    for (k, lam) in (0..spectral.lambdas.len()).map(|k| (k, airy_zero(k))) {
        let z = 4.0 * lam.powi(3) / (27.0 * a_hat * a_hat);
        // U(-5/6, 4/3, z) < (1+z)^{5/6}
        let bound = pref * lam * lam * (-z).exp() * (1.0 + z).powf(5.0 / 6.0);
        if k >= MIN_TERMS && bound <= 1e-17 * magnitude + 1e-300 {
            return Ok((pref * kummer, 12.0 * PI.sqrt() * airy_sum, pref * magnitude));
        }
        let term = lam * lam * (-z).exp() * kummer_u(-5.0 / 6.0, 4.0 / 3.0, z)?;
        kummer += term;
        magnitude += term.abs();
        let zeta = lam * lam * scale;
        let z32 = zeta * zeta.sqrt();
        let (ai, aip) = airy(zeta);
        let bracket = (8.0 * z32 - 7.0) * ai - (8.0 * z32 - 5.0) * aip / zeta.sqrt();
        airy_sum += zeta.powf(2.5) / lam.powi(3) * (-2.0 / 3.0 * z32).exp() * bracket;
    }
    Err(Error::InsufficientSpectrum(format!("Airy sum at Â = {a_hat} needs more than {} eigenvalues", spectral.lambdas.len())))
}

/// Fails unless the forms agree to `1e-9` relative, or to rounding level
/// where the sum has cancelled far below its terms or underflowed.
pub(crate) fn check_forms(k: f64, a: f64, magnitude: f64, a_hat: f64) -> Result<()> {
    if (k - a).abs() > 1e-9 * k.abs() + 64.0 * f64::EPSILON * magnitude + 1e-300 {
        return Err(Error::FormMismatch(format!("Kummer {k:e} vs Airy {a:e} at Â = {a_hat}")));
    }
    Ok(())
}

/// Scaled Airy-case density (Kummer-U form), checked against the Airy-function form.
pub fn pdf_airy(params: &ExcursionParams, spectral: &SpectralData, a_hat: f64) -> Result<f64> {
    let (k, a, m) = airy_forms(params, spectral, a_hat)?;
    check_forms(k, a, m, a_hat)?;
    Ok(k)
}
