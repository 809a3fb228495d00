//! Generalized hypergeometric series `pFq(upper; lower; z)`.
//!
//! Terms are accumulated in double-double arithmetic together with a running
//! bound on the rounding error, so alternating series with large
//! intermediate terms are either evaluated correctly or refused.

use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{Error, Result};

/// Unit roundoff of one double-double operation, padded.
const DD_UNIT: f64 = 4.0e-32;
const MAX_TERMS: usize = 100_000;

/// Region where series evaluation is trusted, and the accuracy reached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccuracyDomain {
    pub max_abs_argument: f64,
    pub target_rel_err: f64,
    pub achieved_rel_err_estimate: f64,
}

impl Default for AccuracyDomain {
    fn default() -> Self {
        AccuracyDomain { max_abs_argument: 30.0, target_rel_err: 1e-9, achieved_rel_err_estimate: 0.0 }
    }
}

/// A series value with its absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypValue {
    pub value: f64,
    pub err_estimate: f64,
    pub domain: AccuracyDomain,
}

impl HypValue {
    fn new(value: f64, err: f64, domain: &AccuracyDomain) -> Self {
        let err = err + value.abs() * f64::EPSILON;
        let rel = if value != 0.0 { err / value.abs() } else { err };
        HypValue {
            value,
            err_estimate: err,
            domain: AccuracyDomain { achieved_rel_err_estimate: rel, ..*domain },
        }
    }

    pub fn rel_err(&self) -> f64 {
        self.domain.achieved_rel_err_estimate
    }
}

fn nonpositive_integer(x: f64) -> Option<usize> {
    (x <= 0.0 && x == x.floor() && x > -1e9).then(|| (-x) as usize)
}

fn same(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs())
}

/// Removes parameter pairs that appear both upstairs and downstairs.
fn reduce(upper: &[f64], lower: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut up: Vec<f64> = upper.to_vec();
    let mut low: Vec<f64> = Vec::with_capacity(lower.len());
    for &b in lower {
        if let Some(pos) = up.iter().position(|&a| same(a, b)) {
            up.remove(pos);
        } else {
            low.push(b);
        }
    }
    (up, low)
}

/// `pFq` with the default accuracy domain (`|z| ≤ 30`, target `1e-9`).
pub fn hyp_pfq(upper: &[f64], lower: &[f64], z: f64) -> Result<HypValue> {
    hyp_pfq_in(&AccuracyDomain::default(), upper, lower, z)
}

/// `pFq` with an explicit accuracy domain.
pub fn hyp_pfq_in(domain: &AccuracyDomain, upper: &[f64], lower: &[f64], z: f64) -> Result<HypValue> {
    if !(domain.target_rel_err > 0.0) {
        return Err(Error::InvalidParameter("target_rel_err must be positive".into()));
    }
    if upper.iter().chain(lower).any(|v| !v.is_finite()) || !z.is_finite() {
        return Err(Error::Domain("non-finite hypergeometric argument".into()));
    }
    let (up, low) = reduce(upper, lower);
    let terminate = up.iter().filter_map(|&a| nonpositive_integer(a)).min();
    for &b in &low {
        if let Some(m) = nonpositive_integer(b) {
            if terminate.is_none_or(|n| n >= m) {
                return Err(Error::Pole(format!("hypergeometric lower parameter {b}")));
            }
        }
    }
    if z == 0.0 || terminate == Some(0) {
        return Ok(HypValue::new(1.0, 0.0, domain));
    }
    let (p, q) = (up.len(), low.len());
    if terminate.is_none() {
        if p > q + 1 {
            return Err(Error::Domain(format!("{p}F{q} diverges for z != 0")));
        }
        if p == q + 1 {
            if z == 1.0 {
                return at_unity(domain, &up, &low);
            }
            if z.abs() >= 1.0 {
                return Err(Error::Domain(format!("{p}F{q} needs |z| < 1, got {z}")));
            }
        }
        if p == 0 && q == 0 {
            return Ok(HypValue::new(z.exp(), 0.0, domain));
        }
        if p == 1 && q == 1 && z < 0.0 {
            let (a, b) = (up[0], low[0]);
            let inner = series(&[b - a], &[b], -z, domain, true)?;
            let scale = z.exp();
            let value = scale * inner.value;
            let err = scale * inner.err_estimate + value.abs() * (z.abs() + 2.0) * f64::EPSILON;
            return check(HypValue::new(value, err, domain));
        }
    }
    check(series(&up, &low, z, domain, false)?)
}

fn check(v: HypValue) -> Result<HypValue> {
    if v.rel_err() > v.domain.target_rel_err {
        return Err(Error::Cancellation(format!(
            "estimated relative error {:.3e} exceeds target {:.1e}",
            v.rel_err(),
            v.domain.target_rel_err
        )));
    }
    Ok(v)
}

/// Double-double quotient refined by two exact residual corrections.
pub(crate) fn dd_div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q1 = a.hi() / b.hi();
    let r = a - b * q1;
    let q2 = r.hi() / b.hi();
    let r = r - b * q2;
    let q3 = r.hi() / b.hi();
    TwoFloat::new_add(q1, q2) + q3
}

fn sign_definite(up: &[f64], low: &[f64], z: f64) -> bool {
    z > 0.0 && up.iter().chain(low).all(|&v| v > 0.0)
}

fn series(up: &[f64], low: &[f64], z: f64, domain: &AccuracyDomain, transformed: bool) -> Result<HypValue> {
    if z.abs() > domain.max_abs_argument && !transformed && !sign_definite(up, low, z) {
        return Err(Error::Cancellation(format!(
            "|z| = {} outside certified domain |z| <= {}",
            z.abs(),
            domain.max_abs_argument
        )));
    }
    let (sum, err) = series_dd(up, low, TwoFloat::from(z))?;
    Ok(HypValue::new(sum.hi() + sum.lo(), err, domain))
}

/// Raw double-double series sum and its absolute error bound.
///
/// No domain check is made; callers combining several sums before rounding
/// use this to keep the cancellation between them exact.
pub(crate) fn series_dd(up: &[f64], low: &[f64], z: TwoFloat) -> Result<(TwoFloat, f64)> {
    let weight = 8.0 * (up.len() + low.len() + 2) as f64 * DD_UNIT;
    let mut term = TwoFloat::from(1.0);
    let mut sum = TwoFloat::from(1.0);
    let mut abs_sum = 1.0;
    let mut round = 0.0;
    for n in 0..MAX_TERMS {
        let fnn = n as f64;
        let mut num = z;
        for &a in up {
            num *= TwoFloat::new_add(a, fnn);
        }
        let mut den = TwoFloat::from(fnn + 1.0);
        for &b in low {
            den *= TwoFloat::new_add(b, fnn);
        }
        term = dd_div(term * num, den);
        if term.hi() == 0.0 {
            return Ok((sum, round));
        }
        sum += term;
        let t = term.hi().abs();
        abs_sum += t;
        round += t * weight * (fnn + 2.0);
        let ratio = (num.hi() / den.hi()).abs();
        let s = sum.hi().abs().max(f64::MIN_POSITIVE);
        if ratio < 0.95 && t < 1e-33 * s {
            let tail = t * ratio / (1.0 - ratio);
            return Ok((sum, round + tail + abs_sum * 1e-300));
        }
    }
    Err(Error::NoConvergence(format!("hypergeometric series at z={}", z.hi())))
}

/// `(q+1)Fq` at `z = 1` from Richardson-extrapolated partial sums.
fn at_unity(domain: &AccuracyDomain, up: &[f64], low: &[f64]) -> Result<HypValue> {
    let s: f64 = low.iter().sum::<f64>() - up.iter().sum::<f64>();
    if !(s > 0.0) {
        return Err(Error::Domain(format!("series at z = 1 diverges (parameter excess {s})")));
    }
    let scale = up.iter().chain(low).fold(1.0f64, |m, v| m.max(v.abs()));
    let n0 = ((4.0 * scale).ceil() as usize).max(32);
    const LEVELS: usize = 7;
    let mut partial = Vec::with_capacity(LEVELS);
    let mut term = 1.0f64;
    let (mut sum, mut comp) = (1.0f64, 0.0f64);
    let mut n = 0usize;
    let mut next = n0;
    while partial.len() < LEVELS {
        let fnn = n as f64;
        let mut r = 1.0 / (fnn + 1.0);
        for &a in up {
            r *= a + fnn;
        }
        for &b in low {
            r /= b + fnn;
        }
        term *= r;
        let t = sum + term;
        comp += if sum.abs() >= term.abs() { (sum - t) + term } else { (term - t) + sum };
        sum = t;
        n += 1;
        if n == next {
            partial.push(sum + comp);
            next *= 2;
        }
    }
    // eliminate N^{-s}, N^{-s-1}, ... successively
    let mut table = partial.clone();
    let mut last_diff = f64::INFINITY;
    let mut best = table[LEVELS - 1];
    for m in 0..LEVELS - 1 {
        let f = 2f64.powf(s + m as f64);
        let next: Vec<f64> = table.windows(2).map(|w| (f * w[1] - w[0]) / (f - 1.0)).collect();
        let cand = *next.last().unwrap();
        let diff = (cand - best).abs();
        if diff > last_diff && m > 2 {
            break;
        }
        last_diff = diff;
        best = cand;
        table = next;
    }
    let err = last_diff + best.abs() * 64.0 * f64::EPSILON;
    check(HypValue::new(best, err, domain))
}

/// Confluent hypergeometric `1F1(a; b; z)`.
pub fn hyp1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    Ok(hyp_pfq(&[a], &[b], z)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unit_at_origin() {
        let v = hyp_pfq(&[1.3, -2.2, 4.0], &[0.7, 9.0], 0.0).unwrap();
        assert_eq!(v.value, 1.0);
    }

    #[test]
    fn elementary_cases() {
        assert_relative_eq!(hyp_pfq(&[], &[], 2.5).unwrap().value, 2.5f64.exp(), max_relative = 1e-15);
        // 1F1(1;2;z) = (e^z - 1)/z
        for &z in &[-20.0, -1.0, 0.3, 12.0] {
            let v = hyp1f1(1.0, 2.0, z).unwrap();
            assert_relative_eq!(v, z.exp_m1() / z, max_relative = 1e-14);
        }
        // 2F1(1,1;2;z) = -ln(1-z)/z
        let z = 0.6;
        assert_relative_eq!(hyp_pfq(&[1.0, 1.0], &[2.0], z).unwrap().value, -(1.0f64 - z).ln() / z, max_relative = 1e-14);
    }

    #[test]
    fn degenerate_pairs_cancel() {
        let a = hyp_pfq(&[1.5, 5.0 / 6.0], &[1.5, 2.0 / 3.0], -1.0).unwrap();
        let b = hyp_pfq(&[5.0 / 6.0], &[2.0 / 3.0], -1.0).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn polynomial_and_poles() {
        // 2F1(-2, b; c; z) = 1 - 2bz/c + b(b+1)z²/(c(c+1))
        let (b, c, z) = (1.5, 2.5, 3.0);
        let expected = 1.0 - 2.0 * b * z / c + b * (b + 1.0) * z * z / (c * (c + 1.0));
        assert_relative_eq!(hyp_pfq(&[-2.0, b], &[c], z).unwrap().value, expected, max_relative = 1e-14);
        assert!(matches!(hyp_pfq(&[1.0], &[-3.0], 0.5), Err(Error::Pole(_))));
        assert!(hyp_pfq(&[-2.0], &[-3.0], 0.5).is_ok());
    }

    #[test]
    fn refuses_outside_domain() {
        assert!(matches!(hyp_pfq(&[0.5, 1.5], &[2.5, 0.7], -31.0), Err(Error::Cancellation(_))));
        assert!(hyp_pfq(&[0.5, 1.5], &[2.5, 0.7], 31.0).is_ok());
        assert!(matches!(hyp_pfq(&[0.5, 1.5], &[2.5], 1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn gauss_sum_at_unity() {
        // 2F1(a,b;c;1) = Γ(c)Γ(c-a-b)/(Γ(c-a)Γ(c-b))
        use crate::specfun::gamma::gamma;
        let (a, b, c) = (0.5, 1.25, 3.0);
        let exact = gamma(c).unwrap() * gamma(c - a - b).unwrap()
            / (gamma(c - a).unwrap() * gamma(c - b).unwrap());
        let v = hyp_pfq(&[a, b], &[c], 1.0).unwrap();
        assert_relative_eq!(v.value, exact, max_relative = 1e-12);
        assert!(v.err_estimate >= (v.value - exact).abs());
    }

    #[test]
    fn quotient_is_double_double() {
        let a = TwoFloat::new_add(1.0, 1e-20);
        let b = TwoFloat::from(3.0);
        let q = dd_div(a, b);
        let back = q * b - a;
        assert!(back.hi().abs() < 1e-31);
    }

    #[test]
    fn large_alternating_argument_is_accurate() {
        // 1F1(1;2;-25) through the generic path: (1 - e^{-25})/25
        let v = series(&[1.0], &[2.0], -25.0, &AccuracyDomain::default(), false).unwrap();
        assert_relative_eq!(v.value, -(-25.0f64).exp_m1() / 25.0, max_relative = 1e-14);
        let e = series(&[1.0, 0.5], &[0.5, 2.0], -29.0, &AccuracyDomain::default(), false).unwrap();
        assert!(e.rel_err() < 1e-12);
    }
}
