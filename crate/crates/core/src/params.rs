//! Physical parameters of the excursion and the quantities derived from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which solution of the centrifugal problem is kept at the origin.
///
/// `Absorbing` keeps `x^{1/2+|α|}` and is the physical excursion for every
/// drift. `Continued` keeps `x^{1/2+α}` with the signed index, which is the
/// analytic continuation used for `-3 < U0 < -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryMode {
    Absorbing,
    Continued,
}

impl std::str::FromStr for BoundaryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "absorbing" => Ok(BoundaryMode::Absorbing),
            "continued" => Ok(BoundaryMode::Continued),
            other => Err(Error::InvalidParameter(format!("unknown boundary mode `{other}`"))),
        }
    }
}

impl std::fmt::Display for BoundaryMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoundaryMode::Absorbing => "absorbing",
            BoundaryMode::Continued => "continued",
        })
    }
}

/// Drift strength `U0`, diffusion constant `D`, duration `T` and boundary mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcursionParams {
    pub u0: f64,
    pub d: f64,
    pub t: f64,
    pub mode: BoundaryMode,
}

impl ExcursionParams {
    pub fn new(u0: f64, d: f64, t: f64, mode: BoundaryMode) -> Result<Self> {
        if !u0.is_finite() {
            return Err(Error::InvalidParameter(format!("U0 must be finite, got {u0}")));
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::InvalidParameter(format!("D must be positive, got {d}")));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("T must be positive, got {t}")));
        }
        if mode == BoundaryMode::Continued && !(u0 > -3.0 && u0 < -1.0) {
            return Err(Error::InvalidParameter(format!(
                "continued mode requires -3 < U0 < -1, got {u0}"
            )));
        }
        Ok(ExcursionParams { u0, d, t, mode })
    }

    /// Absorbing boundary with `D = 1/2`, `T = 1`.
    pub fn absorbing(u0: f64) -> Result<Self> {
        Self::new(u0, 0.5, 1.0, BoundaryMode::Absorbing)
    }

    /// Continued boundary with `D = 1/2`, `T = 1`.
    pub fn continued(u0: f64) -> Result<Self> {
        Self::new(u0, 0.5, 1.0, BoundaryMode::Continued)
    }

    pub fn with_scales(self, d: f64, t: f64) -> Result<Self> {
        Self::new(self.u0, d, t, self.mode)
    }

    /// Signed `α = (U0+1)/2`.
    pub fn alpha(&self) -> f64 {
        0.5 * (self.u0 + 1.0)
    }

    /// The index entering every formula: `|α|` when absorbing, `α` when continued.
    pub fn index(&self) -> f64 {
        match self.mode {
            BoundaryMode::Absorbing => self.alpha().abs(),
            BoundaryMode::Continued => self.alpha(),
        }
    }

    /// `ν = 2·index/3`.
    pub fn nu(&self) -> f64 {
        2.0 * self.index() / 3.0
    }

    /// Area scale `A0 = √D·T^{3/2}`.
    pub fn a0(&self) -> f64 {
        self.d.sqrt() * self.t.powf(1.5)
    }

    /// Coefficient `c` of `c/x²` in the rescaled potential.
    pub fn centrifugal(&self) -> f64 {
        let a = self.index();
        a * a - 0.25
    }

    /// The partner drift `-2-U0` carrying the same absorbing distribution.
    pub fn mirrored(&self) -> Self {
        ExcursionParams { u0: -2.0 - self.u0, ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        let p = ExcursionParams::absorbing(2.5).unwrap();
        assert_eq!(p.alpha(), 1.75);
        assert_eq!(p.index(), 1.75);
        assert!((p.nu() - 3.5 / 3.0).abs() < 1e-15);
        assert!((p.a0() - 0.5f64.sqrt()).abs() < 1e-15);
        let m = p.mirrored();
        assert_eq!(m.u0, -4.5);
        assert_eq!(m.index(), p.index());
        assert_eq!(m.centrifugal(), p.centrifugal());
    }

    #[test]
    fn continued_mode_range() {
        assert!(ExcursionParams::continued(-2.5).is_ok());
        assert!(ExcursionParams::continued(-0.5).is_err());
        assert!(ExcursionParams::continued(-3.0).is_err());
        assert!(ExcursionParams::continued(-2.99).unwrap().index() < 0.0);
    }

    #[test]
    fn rejects_bad_scales() {
        assert!(ExcursionParams::new(0.0, 0.0, 1.0, BoundaryMode::Absorbing).is_err());
        assert!(ExcursionParams::new(0.0, 1.0, -1.0, BoundaryMode::Absorbing).is_err());
        assert!(ExcursionParams::new(f64::NAN, 1.0, 1.0, BoundaryMode::Absorbing).is_err());
    }
}
