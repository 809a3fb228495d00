//! Moments of the area: closed forms, the second-moment series, and
//! quadrature over tabulated densities.
//!
//! Functions named `*_closed`, `m2_series` and `m2_linear` return physical
//! moments carrying the factor `A0^p`; [`MomentSet`] stores them in units of
//! `A0^p`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::DistributionTable;
use crate::error::{Error, Result};
use crate::params::ExcursionParams;
use crate::specfun::{gamma, hurwitz_zeta, hyp_pfq, rgamma};

/// Number of exactly summed terms in [`m2_series`].
pub const M2_TERMS: usize = 200;
/// Powers `k^{-2} … k^{-5}` in the tail fit.
const FIT_TERMS: usize = 4;

/// How a moment was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentMethod {
    ClosedForm,
    Series,
    Quadrature,
    MC,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentTags {
    pub m0: MomentMethod,
    pub m1: MomentMethod,
    pub m2: MomentMethod,
    pub m_nu: MomentMethod,
}

/// Moments of `Â = A/A0`: orders 0, 1, 2 and `nu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub m0: f64,
    pub m1: f64,
    pub m2: f64,
    pub m_nu: f64,
    pub nu: f64,
    pub method_tags: MomentTags,
}

impl MomentSet {
    /// Closed forms and the series, with `ν = 2|α|/3` (or the signed index in
    /// continued mode).
    pub fn analytic(params: &ExcursionParams, tol: f64) -> Result<Self> {
        let a0 = params.a0();
        let nu = params.nu();
        let m_nu = if params.index() > 0.0 {
            // the absorbing law depends on |α| only, so the partner drift
            // supplies the closed form when α < 0
            let p = if params.alpha() > 0.0 { *params } else { params.mirrored() };
            m_nu_closed(&p)? / a0.powf(nu)
        } else if params.index() == 0.0 {
            1.0
        } else {
            f64::NAN
        };
        Ok(MomentSet {
            m0: 1.0,
            m1: m1_closed(params)? / a0,
            m2: m2_series(params, tol)? / (a0 * a0),
            m_nu,
            nu,
            method_tags: MomentTags {
                m0: MomentMethod::ClosedForm,
                m1: MomentMethod::ClosedForm,
                m2: MomentMethod::Series,
                m_nu: MomentMethod::ClosedForm,
            },
        })
    }

    /// Quadrature moments of a tabulated density.
    pub fn from_table(table: &DistributionTable, nu: f64) -> Result<Self> {
        let q = MomentMethod::Quadrature;
        Ok(MomentSet {
            m0: moment_quadrature(table, 0.0)?,
            m1: moment_quadrature(table, 1.0)?,
            m2: moment_quadrature(table, 2.0)?,
            m_nu: moment_quadrature(table, nu)?,
            nu,
            method_tags: MomentTags { m0: q, m1: q, m2: q, m_nu: q },
        })
    }

    /// Sample moments of scaled areas.
    pub fn from_samples(a_hat: &[f64], nu: f64) -> Result<Self> {
        if a_hat.is_empty() {
            return Err(Error::InvalidParameter("no samples".into()));
        }
        let n = a_hat.len() as f64;
        let mean = |f: &dyn Fn(f64) -> f64| a_hat.iter().map(|&x| f(x)).sum::<f64>() / n;
        let mc = MomentMethod::MC;
        Ok(MomentSet {
            m0: 1.0,
            m1: mean(&|x| x),
            m2: mean(&|x| x * x),
            m_nu: mean(&|x| x.powf(nu)),
            nu,
            method_tags: MomentTags { m0: mc, m1: mc, m2: mc, m_nu: mc },
        })
    }

    pub fn variance(&self) -> f64 {
        self.m2 - self.m1 * self.m1
    }
}

/// `M1 = π Γ(a+3/2) / (4 Γ(a+1)) · A0`.
pub fn m1_closed(params: &ExcursionParams) -> Result<f64> {
    let a = params.index();
    if a <= -1.0 {
        return Err(Error::Pole(format!("Γ(a+1) at a = {a}")));
    }
    Ok(PI * gamma(a + 1.5)? * rgamma(a + 1.0) / 4.0 * params.a0())
}

/// `M2` with the leading coefficients of the summand, `c2/k² + c3/k³ + …`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct M2Series {
    /// `M2 / A0²`.
    pub value: f64,
    pub err: f64,
    pub c2: f64,
    pub c3: f64,
}

/// Least-squares fit of `y = Σ_j c_j x^j` for `j < n`.
fn poly_fit(xs: &[f64], ys: &[f64], n: usize) -> Vec<f64> {
    let mut m = vec![vec![0.0; n + 1]; n];
    for (&x, &y) in xs.iter().zip(ys) {
        let pow: Vec<f64> = (0..n).map(|j| x.powi(j as i32)).collect();
        for i in 0..n {
            for j in 0..n {
                m[i][j] += pow[i] * pow[j];
            }
            m[i][n] += pow[i] * y;
        }
    }
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
        m.swap(c, p);
        for r in 0..n {
            if r != c {
                let f = m[r][c] / m[c][c];
                for k in c..=n {
                    m[r][k] -= f * m[c][k];
                }
            }
        }
    }
    (0..n).map(|i| m[i][n] / m[i][i]).collect()
}

/// Summands `Γ²(k+3/2) Γ²(a+k+3/2) / (k! Γ(k+9/2) Γ(a+k+1) Γ(a+k+9/2))
/// · 3F2(k+3/2, a+k+3/2, 3; k+9/2, a+k+9/2; 1)` for `k < n`.
fn m2_summands(a: f64, n: usize) -> Result<Vec<f64>> {
    // the Γ ratios by forward recurrence from k = 0
    let mut ratio = vec![0.0; n];
    let mut r = gamma(1.5)?.powi(2) * rgamma(4.5) * (gamma(a + 1.5)?.powi(2) * rgamma(a + 1.0) * rgamma(a + 4.5));
    for (k, slot) in ratio.iter_mut().enumerate() {
        *slot = r;
        let (k, ak) = (k as f64, a + k as f64);
        r *= (k + 1.5).powi(2) / ((k + 1.0) * (k + 4.5)) * (ak + 1.5).powi(2) / ((ak + 1.0) * (ak + 4.5));
    }
    ratio
        .par_iter()
        .enumerate()
        .map(|(k, r)| {
            let k = k as f64;
            let f = hyp_pfq(&[k + 1.5, a + k + 1.5, 3.0], &[k + 4.5, a + k + 4.5], 1.0)?;
            Ok(r * f.value)
        })
        .collect()
}

/// `M2/A0²` with fitted-tail details.
///
/// Summands are exact up to `k = 200`; beyond that a fit in powers of `1/k`
/// on `[100, 200]` is summed through Hurwitz zeta values.
pub fn m2_series_detail(params: &ExcursionParams, tol: f64) -> Result<M2Series> {
    if !(tol >= 1e-8) {
        return Err(Error::InvalidParameter(format!("M2 tolerance must be at least 1e-8, got {tol}")));
    }
    let a = params.index();
    if a < 0.0 {
        return Err(Error::Domain(format!("second-moment series needs index >= 0, got {a}")));
    }
    let k_max = M2_TERMS;
    let s = m2_summands(a, k_max + 1)?;
    let head: f64 = s.iter().sum();
    let ks: Vec<f64> = (k_max / 2..=k_max).map(|k| k as f64).collect();
    let inv: Vec<f64> = ks.iter().map(|k| 1.0 / k).collect();
    let scaled: Vec<f64> = ks.iter().map(|&k| s[k as usize] * k * k).collect();
    let q = k_max as f64 + 1.0;
    let zeta: Vec<f64> = (0..FIT_TERMS + 1).map(|j| hurwitz_zeta(2.0 + j as f64, q)).collect::<Result<_>>()?;
    let tail = |n: usize| -> (Vec<f64>, f64) {
        let c = poly_fit(&inv, &scaled, n);
        let t = c.iter().zip(&zeta).map(|(c, z)| c * z).sum();
        (c, t)
    };
    let (fit, tail_main) = tail(FIT_TERMS);
    let (_, tail_check) = tail(FIT_TERMS + 1);
    let pref = 16.0 * gamma(3.0 + a)? * rgamma(1.0 + a);
    let err = pref * (tail_main - tail_check).abs() + 1e-13;
    if err > tol {
        return Err(Error::NoConvergence(format!("M2 tail fit uncertain by {err:.2e} (tolerance {tol:.1e})")));
    }
    Ok(M2Series { value: pref * (head + tail_main), err, c2: fit[0], c3: fit[1] })
}

/// `M2` from the eigen-series, `· A0²`.
pub fn m2_series(params: &ExcursionParams, tol: f64) -> Result<f64> {
    let a0 = params.a0();
    Ok(m2_series_detail(params, tol)?.value * a0 * a0)
}

/// `M2 ≈ ((83/135)(|α| - 1/2) + 5/6) A0²`, exact at `|α| = 1/2` and `3`.
pub fn m2_linear(params: &ExcursionParams) -> f64 {
    let a0 = params.a0();
    (83.0 / 135.0 * (params.alpha().abs() - 0.5) + 5.0 / 6.0) * a0 * a0
}

/// `M_ν = 2^{2α-1} Γ(α) / (3^{2ν-1} Γ(ν)) · A0^ν` with `ν = 2α/3`, for `α > 0`.
pub fn m_nu_closed(params: &ExcursionParams) -> Result<f64> {
    let alpha = params.alpha();
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("fractional moment needs α > 0, got {alpha}")));
    }
    let nu = 2.0 * alpha / 3.0;
    Ok(2f64.powf(2.0 * alpha - 1.0) * gamma(alpha)? / (3f64.powf(2.0 * nu - 1.0) * gamma(nu)?) * params.a0().powf(nu))
}

/// Largest omitted mass tolerated by [`moment_quadrature`].
pub const COVERAGE_TOL: f64 = 1e-6;

/// `∫ Â^p pdf dÂ` over the table by composite Simpson on the (possibly
/// uneven) grid, plus estimates of the mass outside it.
pub fn moment_quadrature(table: &DistributionTable, p: f64) -> Result<f64> {
    if !(p >= 0.0) {
        return Err(Error::InvalidParameter(format!("moment order must be >= 0, got {p}")));
    }
    let x = &table.a_hat_grid;
    let n = x.len();
    if n < 3 {
        return Err(Error::Coverage("need at least three grid points".into()));
    }
    let f: Vec<f64> = x.iter().zip(&table.pdf_scaled).map(|(x, v)| x.powf(p) * v).collect();
    let mut sum = 0.0;
    let mut i = 0;
    while i + 2 < n {
        let (h0, h1) = (x[i + 1] - x[i], x[i + 2] - x[i + 1]);
        let hs = h0 + h1;
        sum += hs / 6.0
            * ((2.0 - h1 / h0) * f[i] + hs * hs / (h0 * h1) * f[i + 1] + (2.0 - h0 / h1) * f[i + 2]);
        i += 2;
    }
    if i + 1 < n {
        sum += 0.5 * (x[i + 1] - x[i]) * (f[i] + f[i + 1]);
    }
    // left: the density rises steeply, so x0·f(x0) bounds the omitted mass
    let left = x[0] * f[0].max(0.0);
    // right: local exponential decay rate from the last two points
    let (fa, fb) = (f[n - 2], f[n - 1]);
    let right = if fb <= 0.0 {
        0.0
    } else if fa > fb {
        fb * (x[n - 1] - x[n - 2]) / (fa / fb).ln()
    } else {
        f64::INFINITY
    };
    if left + right > COVERAGE_TOL {
        return Err(Error::Coverage(format!(
            "mass outside [{}, {}] estimated at {:.2e}",
            x[0],
            x[n - 1],
            left + right
        )));
    }
    Ok(sum + 0.5 * left + right)
}
