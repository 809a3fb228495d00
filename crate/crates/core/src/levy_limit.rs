//! The analytically continued distribution as `U0 → -3`.
//!
//! The ground state of the continued problem approaches zero linearly in
//! `U0 + 3`, its weight at the origin grows to dominate, and the transform
//! tends to `exp(-λ0 ŝ^{2/3})`: a one-sided stable law of index 2/3.

use serde::{Deserialize, Serialize};

use crate::distribution::{levy23, LevyForm};
use crate::error::{Error, Result};
use crate::specfun::gamma;
use crate::spectrum::solve_index;

/// Above this distance from `-3` the limit law is only a rough guide.
pub const VALIDITY_MARGIN: f64 = 0.1;

/// `2π / (3^{5/6} Γ(2/3)²)`.
pub fn lambda0_coefficient() -> f64 {
    let g = gamma(2.0 / 3.0).expect("Γ(2/3)");
    2.0 * std::f64::consts::PI / (3f64.powf(5.0 / 6.0) * g * g)
}

fn check(u0: f64) -> Result<()> {
    if !(-3.0..-1.0).contains(&u0) {
        return Err(Error::Domain(format!("continued region is -3 <= U0 < -1, got {u0}")));
    }
    Ok(())
}

/// Leading-order ground-state eigenvalue near `U0 = -3`.
pub fn lambda0_perturbative(u0: f64) -> Result<f64> {
    check(u0)?;
    Ok(lambda0_coefficient() * (u0 + 3.0))
}

/// Leading-order origin coefficient `√(U0 + 3)` of the ground state.
pub fn d0_perturbative(u0: f64) -> Result<f64> {
    check(u0)?;
    Ok((u0 + 3.0).sqrt())
}

/// First `k` eigenvalues of `-φ'' + (3/(4x²) + x) φ = λ φ`, `φ ~ x^{3/2}`,
/// which the excited levels of the continued problem approach.
pub fn limit_fixed_spectrum(k: usize) -> Result<Vec<f64>> {
    limit_fixed_spectrum_with_tol(k, 1e-10)
}

pub fn limit_fixed_spectrum_with_tol(k: usize, tol: f64) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::InvalidParameter("need at least one eigenvalue".into()));
    }
    if !(tol > 0.0 && tol < 1e-2) {
        return Err(Error::InvalidParameter(format!("tolerance must be in (0, 1e-2), got {tol}")));
    }
    Ok(solve_index(1.0, k, tol, None)?.0)
}

/// `exp(-λ0 ŝ^{2/3})` with the perturbative `λ0`.
pub fn limit_laplace(u0: f64, s_hat: f64) -> Result<f64> {
    if !(s_hat >= 0.0) || !s_hat.is_finite() {
        return Err(Error::Domain(format!("Laplace variable must be finite and >= 0, got {s_hat}")));
    }
    Ok((-lambda0_perturbative(u0)? * s_hat.powf(2.0 / 3.0)).exp())
}

/// Whether `U0` is close enough to `-3` for the limit law to hold to about 2%.
pub fn limit_is_reliable(u0: f64) -> bool {
    (-3.0..-1.0).contains(&u0) && u0 + 3.0 <= VALIDITY_MARGIN
}

/// Limit-law scaled density `A0·P` at `Â`: `λ0^{-3/2} L(Â λ0^{-3/2})`.
pub fn limit_pdf_scaled(u0: f64, a_hat: f64) -> Result<f64> {
    let l0 = lambda0_perturbative(u0)?;
    if l0 == 0.0 {
        return Err(Error::Domain("the limit law degenerates at U0 = -3".into()));
    }
    let scale = l0.powf(1.5);
    Ok(levy23(a_hat / scale, LevyForm::KummerU) / scale)
}

/// Perturbative ground state together with the fixed excited levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSpectrum {
    pub lambda0: f64,
    pub d0: f64,
    pub lambdas_fixed: Vec<f64>,
}

impl LimitSpectrum {
    pub fn new(u0: f64, k: usize) -> Result<Self> {
        Ok(LimitSpectrum {
            lambda0: lambda0_perturbative(u0)?,
            d0: d0_perturbative(u0)?,
            lambdas_fixed: limit_fixed_spectrum(k)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_value() {
        assert!((lambda0_coefficient() - 1.371_7).abs() < 1e-3);
        assert_eq!(lambda0_perturbative(-3.0).unwrap(), 0.0);
        assert_eq!(d0_perturbative(-2.75).unwrap(), 0.5);
        assert!(lambda0_perturbative(-1.0).is_err());
        assert!(d0_perturbative(-3.1).is_err());
    }

    #[test]
    fn limit_transform_endpoints() {
        assert_eq!(limit_laplace(-2.99, 0.0).unwrap(), 1.0);
        assert!(limit_is_reliable(-2.95));
        assert!(!limit_is_reliable(-2.5));
    }
}
