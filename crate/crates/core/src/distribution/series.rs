//! Real-space eigen-series: three `2F2` terms per eigenvalue.

use std::f64::consts::PI;

use super::laplace::{check_spectrum, weight_prefactor};
use crate::error::{Error, Result};
use crate::params::ExcursionParams;
use crate::specfun::gamma::{gamma, sin_pi};
use crate::specfun::{hyp_pfq_in, AccuracyDomain};
use crate::spectrum::SpectralData;

const MIN_TERMS: usize = 5;
const TERM_CUTOFF: f64 = 1e-12;
/// Only the absolute error of the combined term matters, and it is tracked.
const DOMAIN: AccuracyDomain = AccuracyDomain { max_abs_argument: 50.0, target_rel_err: 1.0, achieved_rel_err_estimate: 0.0 };

/// Scaled density `A0·P` at `Â` and an absolute error estimate.
///
/// Each eigenvalue contributes
/// `Γ(5/3+ν) sin(π(2+3ν)/3) F₁ - w Γ(7/3+ν) sin(π(4+3ν)/3) F₂ + ½ w² Γ(3+ν) sin(πν) F₃`
/// with `w = λ Â^{-2/3}` and `2F2` functions of `z = -4λ³/(27Â²)`. Terms whose
/// magnitude bound `e^{z} (1+|z|)^{ν+2}` falls below `1e-12` are dropped.
/// Arguments beyond `|z| = 50`, where double-double summation no longer
/// resolves the cancellation, come back as [`Error::Cancellation`].
pub fn pdf_hyp(params: &ExcursionParams, spectral: &SpectralData, a_hat: f64) -> Result<(f64, f64)> {
    check_spectrum(params, spectral)?;
    if !(a_hat > 0.0) || !a_hat.is_finite() {
        return Err(Error::Domain(format!("scaled area must be positive, got {a_hat}")));
    }
    let a = params.index();
    let nu = params.nu();
    let pref = -weight_prefactor(a) / (PI * a_hat.powf(nu + 5.0 / 3.0));
    let g = [
        gamma(5.0 / 3.0 + nu)? * sin_pi((2.0 + 3.0 * nu) / 3.0),
        -gamma(7.0 / 3.0 + nu)? * sin_pi((4.0 + 3.0 * nu) / 3.0),
        0.5 * gamma(3.0 + nu)? * sin_pi(nu),
    ];
    let params_2f2: [([f64; 2], [f64; 2]); 3] = [
        ([4.0 / 3.0 + nu / 2.0, 5.0 / 6.0 + nu / 2.0], [1.0 / 3.0, 2.0 / 3.0]),
        ([7.0 / 6.0 + nu / 2.0, 5.0 / 3.0 + nu / 2.0], [2.0 / 3.0, 4.0 / 3.0]),
        ([2.0 + nu / 2.0, 1.5 + nu / 2.0], [4.0 / 3.0, 5.0 / 3.0]),
    ];
    let growth = gamma(nu + 2.0)?.max(1.0);
    let w0 = a_hat.powf(-2.0 / 3.0);
    let (mut sum, mut err, mut dropped) = (0.0, 0.0, 0.0);
    let mut converged = false;
    for (k, (&lam, &d)) in spectral.lambdas.iter().zip(&spectral.dks).enumerate() {
        let z = -4.0 * lam.powi(3) / (27.0 * a_hat * a_hat);
        let bound = pref.abs() * d * d * z.exp() * (1.0 - z).powf(nu + 2.0) * growth;
        if bound < TERM_CUTOFF {
            dropped += bound;
            if k + 1 >= MIN_TERMS {
                converged = true;
                break;
            }
            continue;
        }
        let w = lam * w0;
        let mut term = 0.0;
        let mut term_err = 0.0;
        for (j, (up, low)) in params_2f2.iter().enumerate() {
            let f = hyp_pfq_in(&DOMAIN, up, low, z)?;
            let c = g[j] * w.powi(j as i32);
            term += c * f.value;
            term_err += (c * f.value).abs() * 4.0 * f64::EPSILON + c.abs() * f.err_estimate;
        }
        sum += d * d * term;
        err += d * d * term_err;
    }
    if !converged {
        return Err(Error::InsufficientSpectrum(format!(
            "eigen-series at Â = {a_hat} not converged after K = {} terms",
            spectral.lambdas.len()
        )));
    }
    Ok((pref * sum, pref.abs() * err + dropped))
}
