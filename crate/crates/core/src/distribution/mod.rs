//! The area density in real space and in Laplace space.
//!
//! Everything here works in scaled units: `Â = A/A0` with `A0 = √D T^{3/2}`,
//! and densities are reported as `A0·P(A, T)`, a function of `Â` alone.

mod airy;
mod laplace;
mod levy;
mod series;
mod talbot;

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ExcursionParams;
use crate::spectrum::SpectralData;

pub use airy::{airy_forms, pdf_airy};
pub use laplace::{g0_propagator, laplace_pdf, laplace_pdf_with_tol, mean_from_laplace, TAIL_TOL};
pub use levy::{levy23, LevyForm};
pub use series::pdf_hyp;
pub use talbot::{pdf_talbot, pdf_talbot_with_err};

/// Below this `Â` the real-space series is not attempted.
pub const HYP_SERIES_FLOOR: f64 = 0.3;

/// How a density value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    HypSeries,
    AiryClosed,
    Talbot,
    MC,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::HypSeries => "hypseries",
            Method::AiryClosed => "airy",
            Method::Talbot => "talbot",
            Method::MC => "mc",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hyp" | "hypseries" => Ok(Method::HypSeries),
            "airy" | "airyclosed" => Ok(Method::AiryClosed),
            "talbot" => Ok(Method::Talbot),
            "mc" => Ok(Method::MC),
            other => Err(Error::InvalidParameter(format!("unknown method `{other}`"))),
        }
    }
}

/// Scaled density on a grid of `Â`, with a per-point error and method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionTable {
    pub a_hat_grid: Vec<f64>,
    pub pdf_scaled: Vec<f64>,
    pub err: Vec<f64>,
    pub method: Vec<Method>,
    pub params: ExcursionParams,
}

/// `n` log-spaced points on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && n >= 2) {
        return Err(Error::InvalidParameter(format!("bad grid [{lo}, {hi}] with {n} points")));
    }
    let (l0, l1) = (lo.ln(), hi.ln());
    Ok((0..n).map(|i| (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp()).collect())
}

/// 400 log-spaced points on `[0.05, 6]`.
pub fn default_grid() -> Vec<f64> {
    log_grid(0.05, 6.0, 400).expect("valid default grid")
}

fn point(params: &ExcursionParams, spectral: &SpectralData, x: f64, method: Method) -> Result<(f64, f64, Method)> {
    match method {
        Method::HypSeries if x >= HYP_SERIES_FLOOR => match pdf_hyp(params, spectral, x) {
            Ok((v, e)) => Ok((v, e, Method::HypSeries)),
            Err(Error::Cancellation(_)) => point(params, spectral, x, Method::Talbot),
            Err(e) => Err(e),
        },
        Method::HypSeries | Method::Talbot => {
            let (v, e) = pdf_talbot_with_err(params, spectral, x)?;
            Ok((v, e, Method::Talbot))
        }
        Method::AiryClosed => {
            let (k, a, m) = airy_forms(params, spectral, x)?;
            airy::check_forms(k, a, m, x)?;
            Ok((k, (k - a).abs() + f64::EPSILON * m, Method::AiryClosed))
        }
        Method::MC => Err(Error::InvalidParameter("Monte Carlo tables are built from samples".into())),
    }
}

impl DistributionTable {
    /// Evaluates `method` on `grid`. `HypSeries` hands small `Â` and refused
    /// points over to the contour inversion.
    pub fn compute(params: &ExcursionParams, spectral: &SpectralData, grid: &[f64], method: Method) -> Result<Self> {
        let rows: Vec<(f64, f64, Method)> = grid.par_iter().map(|&x| point(params, spectral, x, method)).collect::<Result<_>>()?;
        Ok(DistributionTable {
            a_hat_grid: grid.to_vec(),
            pdf_scaled: rows.iter().map(|r| r.0).collect(),
            err: rows.iter().map(|r| r.1).collect(),
            method: rows.iter().map(|r| r.2).collect(),
            params: *params,
        })
    }

    /// Histogram density of scaled areas on `bins + 1` equally spaced edges
    /// over `[0, hi]`, reported at bin centres with Poisson errors.
    pub fn from_samples(params: &ExcursionParams, a_hat: &[f64], bins: usize, hi: f64) -> Result<Self> {
        if a_hat.is_empty() || bins == 0 || !(hi > 0.0) {
            return Err(Error::InvalidParameter("need samples, bins and a positive range".into()));
        }
        let w = hi / bins as f64;
        let mut counts = vec![0usize; bins];
        for &x in a_hat {
            if (0.0..hi).contains(&x) {
                counts[(x / w) as usize] += 1;
            }
        }
        let n = a_hat.len() as f64;
        Ok(DistributionTable {
            a_hat_grid: (0..bins).map(|i| (i as f64 + 0.5) * w).collect(),
            pdf_scaled: counts.iter().map(|&c| c as f64 / (n * w)).collect(),
            err: counts.iter().map(|&c| (c as f64).sqrt() / (n * w)).collect(),
            method: vec![Method::MC; bins],
            params: *params,
        })
    }

    pub fn len(&self) -> usize {
        self.a_hat_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a_hat_grid.is_empty()
    }

    /// Trapezoid integral of `Â^p · pdf` over the grid.
    pub fn trapezoid_moment(&self, p: f64) -> f64 {
        let g = &self.a_hat_grid;
        let f: Vec<f64> = g.iter().zip(&self.pdf_scaled).map(|(x, v)| x.powf(p) * v).collect();
        (1..g.len()).map(|i| 0.5 * (g[i] - g[i - 1]) * (f[i] + f[i - 1])).sum()
    }

    /// Trapezoid integral of the density over the grid.
    pub fn trapezoid(&self) -> f64 {
        self.trapezoid_moment(0.0)
    }

    /// Physical areas `A` and densities `P(A, T)` for the table's `D` and `T`.
    pub fn physical(&self) -> (Vec<f64>, Vec<f64>) {
        let a0 = self.params.a0();
        (self.a_hat_grid.iter().map(|x| x * a0).collect(), self.pdf_scaled.iter().map(|p| p / a0).collect())
    }

    /// Rows `a_hat,pdf_scaled,err,method` after a header line.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["a_hat", "pdf_scaled", "err", "method"])?;
        for i in 0..self.len() {
            w.write_record([
                format!("{:.17e}", self.a_hat_grid[i]),
                format!("{:.17e}", self.pdf_scaled[i]),
                format!("{:.3e}", self.err[i]),
                self.method[i].to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
