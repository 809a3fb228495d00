//! Confluent hypergeometric function of the second kind `U(a, b, z)`, `z > 0`.
//!
//! Large `z` uses the asymptotic series, small `z` the combination of two
//! `1F1` series, and the remaining region the Laplace integral
//! `U = Γ(a)^{-1} ∫ e^{-zt} t^{a-1} (1+t)^{b-a-1} dt` followed by downward
//! recurrence in `a` when `a ≤ 0`.

use crate::error::{Error, Result};
use crate::numerics::quad::{integrate, QuadOptions};
use crate::specfun::gamma::{gamma, rgamma};
use crate::specfun::hyper::hyp1f1;

const ASYMPTOTIC_FROM: f64 = 20.0;
const SERIES_BELOW: f64 = 2.0;

/// `U(a, b, z)` for real `a`, `b` and `z > 0`.
pub fn kummer_u(a: f64, b: f64, z: f64) -> Result<f64> {
    if z.is_nan() || z <= 0.0 {
        return Err(Error::Domain(format!("kummer U requires z > 0, got {z}")));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain("kummer U parameters must be finite".into()));
    }
    if a == 0.0 {
        return Ok(1.0);
    }
    if z >= ASYMPTOTIC_FROM || terminating(a - b + 1.0) || terminating(a) {
        if let Some(v) = asymptotic(a, b, z) {
            return Ok(v);
        }
    }
    if z < SERIES_BELOW && (b - b.round()).abs() > 0.05 {
        if let Some(v) = from_series(a, b, z)? {
            return Ok(v);
        }
    }
    by_recurrence(a, b, z)
}

/// `dU/dz = -a U(a+1, b+1, z)`.
pub fn kummer_u_prime(a: f64, b: f64, z: f64) -> Result<f64> {
    Ok(-a * kummer_u(a + 1.0, b + 1.0, z)?)
}

fn terminating(x: f64) -> bool {
    x <= 0.0 && x == x.floor() && x > -50.0
}

/// `z^{-a} Σ (a)_n (a-b+1)_n / n! (-z)^{-n}`, accepted when the smallest
/// term is below `1e-15` of the sum.
fn asymptotic(a: f64, b: f64, z: f64) -> Option<f64> {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut prev = 1.0f64;
    for n in 1..200 {
        let fnn = n as f64;
        term *= -(a + fnn - 1.0) * (a - b + fnn) / (fnn * z);
        if term == 0.0 {
            return Some(sum * z.powf(-a));
        }
        if term.abs() > prev {
            return None;
        }
        sum += term;
        prev = term.abs();
        if term.abs() < 1e-16 * sum.abs() {
            return Some(sum * z.powf(-a));
        }
    }
    None
}

fn from_series(a: f64, b: f64, z: f64) -> Result<Option<f64>> {
    let t1 = gamma(1.0 - b)? * rgamma(a - b + 1.0) * hyp1f1(a, b, z)?;
    let t2 = gamma(b - 1.0)? * rgamma(a) * z.powf(1.0 - b) * hyp1f1(a - b + 1.0, 2.0 - b, z)?;
    let v = t1 + t2;
    if v.abs() < 1e-3 * (t1.abs() + t2.abs()) {
        return Ok(None);
    }
    Ok(Some(v))
}

fn by_recurrence(a: f64, b: f64, z: f64) -> Result<f64> {
    if a > 0.0 {
        return integral(a, b, z);
    }
    let shift = (-a).floor() + 1.0;
    let top = a + shift;
    let mut u_hi = integral(top + 1.0, b, z)?;
    let mut u = integral(top, b, z)?;
    let mut ac = top;
    for _ in 0..shift as usize {
        // U(a-1) = (2a - b + z) U(a) - a (a - b + 1) U(a+1)
        let next = (2.0 * ac - b + z) * u - ac * (ac - b + 1.0) * u_hi;
        u_hi = u;
        u = next;
        ac -= 1.0;
    }
    Ok(u)
}

/// Laplace integral in the variable `u = z t`, for `a > 0`.
fn integral(a: f64, b: f64, z: f64) -> Result<f64> {
    let c = b - a - 1.0;
    let u_max = 60.0 + 3.0 * (a + c.abs());
    let mut knots: Vec<f64> = vec![0.0, 0.25 * z, z, 4.0 * z, 1.0, 4.0, 16.0, u_max]
        .into_iter()
        .filter(|&u| u >= 0.0 && u <= u_max)
        .collect();
    knots.sort_by(|x, y| x.total_cmp(y));
    knots.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * y.abs().max(1e-300));
    let opts = QuadOptions { abs_tol: 0.0, rel_tol: 1e-14, max_intervals: 4000 };
    let value = if a < 1.0 {
        // v = u^a removes the u^{a-1} endpoint singularity
        let inv = 1.0 / a;
        let vk: Vec<f64> = knots.iter().map(|u| u.powf(a)).collect();
        integrate(
            |v| {
                let u = v.powf(inv);
                (-u).exp() * (1.0 + u / z).powf(c)
            },
            &vk,
            &opts,
        )?
        .value
            * inv
    } else {
        integrate(|u| (-u).exp() * u.powf(a - 1.0) * (1.0 + u / z).powf(c), &knots, &opts)?.value
    };
    Ok(value * z.powf(-a) * rgamma(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::airy::airy_ai;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn closed_forms() {
        // U(a, a+1, z) = z^{-a}
        for &z in &[0.01, 0.7, 3.0, 15.0, 45.0] {
            assert_relative_eq!(kummer_u(0.3, 1.3, z).unwrap(), z.powf(-0.3), max_relative = 1e-12);
        }
        // U(1/2, 1/2, z) = √π e^z erfc(√z); at z = 1 erfc(1) = 0.15729920705028513
        assert_relative_eq!(
            kummer_u(0.5, 0.5, 1.0).unwrap(),
            PI.sqrt() * 1f64.exp() * 0.157_299_207_050_285_13,
            max_relative = 1e-12
        );
    }

    #[test]
    fn reflection_identity() {
        for &(a, b) in &[(1.0 / 6.0, 4.0 / 3.0), (-5.0 / 6.0, 4.0 / 3.0), (0.7, 2.2), (2.5, 0.4)] {
            for &z in &[1e-3, 0.3, 1.5, 4.0, 12.0, 30.0, 50.0] {
                let lhs = kummer_u(a, b, z).unwrap();
                let rhs = z.powf(1.0 - b) * kummer_u(1.0 + a - b, 2.0 - b, z).unwrap();
                assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn airy_connection() {
        // U(5/6, 5/3, (4/3)x^{3/2}) = √π/x · e^{2x^{3/2}/3} 2^{-2/3} 3^{5/6} Ai(x)
        for &x in &[0.5f64, 1.0, 2.0, 4.0] {
            let lhs = kummer_u(5.0 / 6.0, 5.0 / 3.0, 4.0 / 3.0 * x.powf(1.5)).unwrap();
            let rhs = PI.sqrt() / x * (2.0 / 3.0 * x.powf(1.5)).exp() * 2f64.powf(-2.0 / 3.0) * 3f64.powf(5.0 / 6.0) * airy_ai(x);
            assert_relative_eq!(lhs, rhs, max_relative = 1e-11);
        }
    }

    #[test]
    fn contiguous_relation() {
        // U(a-1, b-1, z) = (1 - b + z) U(a, b, z) - z U'(a, b, z)
        let (a, b) = (1.0 / 6.0, 7.0 / 3.0);
        for &z in &[0.2, 1.0, 5.0, 25.0] {
            let lhs = kummer_u(a - 1.0, b - 1.0, z).unwrap();
            let rhs = (1.0 - b + z) * kummer_u(a, b, z).unwrap() - z * kummer_u_prime(a, b, z).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
        }
    }

    #[test]
    fn method_regions_agree() {
        for &(a, b) in &[(1.0 / 6.0, 4.0 / 3.0), (-5.0 / 6.0, 4.0 / 3.0)] {
            for &z in &[1.5, 1.99, 2.01] {
                let s = from_series(a, b, z).unwrap().unwrap();
                let q = by_recurrence(a, b, z).unwrap();
                assert_relative_eq!(s, q, max_relative = 1e-11);
            }
            let z = 45.0;
            assert_relative_eq!(asymptotic(a, b, z).unwrap(), by_recurrence(a, b, z).unwrap(), max_relative = 1e-11);
        }
    }

    #[test]
    fn rejects_nonpositive_argument() {
        assert!(kummer_u(1.0, 1.0, 0.0).is_err());
        assert!(kummer_u(1.0, 1.0, -2.0).is_err());
    }
}
