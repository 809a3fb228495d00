//! Airy function `Ai`, its derivative and its real zeros.
//!
//! For `|x| ≤ 8` the Maclaurin series is summed in double-double arithmetic
//! so the exponential cancellation on the positive axis costs no accuracy.
//! Outside that interval the standard asymptotic expansions are used.

use std::f64::consts::PI;

use twofloat::TwoFloat;

const SERIES_LIMIT: f64 = 8.0;
const AI0: (f64, f64) = (0.355_028_053_887_817_2, 2.052_336_324_362_12e-17);
const MINUS_AIP0: (f64, f64) = (0.258_819_403_792_806_8, -2.522_243_111_610_832e-17);

/// `(Ai(x), Ai'(x))`.
pub fn airy(x: f64) -> (f64, f64) {
    if x.is_nan() {
        return (f64::NAN, f64::NAN);
    }
    if x.abs() <= SERIES_LIMIT {
        maclaurin(x)
    } else if x > 0.0 {
        asymptotic_pos(x)
    } else {
        asymptotic_neg(-x)
    }
}

pub fn airy_ai(x: f64) -> f64 {
    airy(x).0
}

pub fn airy_ai_prime(x: f64) -> f64 {
    airy(x).1
}

fn maclaurin(x: f64) -> (f64, f64) {
    let x3 = TwoFloat::new_mul(x, x) * x;
    let xt = TwoFloat::from(x);
    let mut f = TwoFloat::from(1.0);
    let mut g = xt;
    let mut fp = TwoFloat::new_mul(x, x) * 0.5;
    let mut gp = TwoFloat::from(1.0);
    let mut tf = TwoFloat::from(1.0);
    let mut tg = xt;
    let mut tfp = fp;
    let mut tgp = TwoFloat::from(1.0);
    let tiny = 1e-34;
    for k in 1..200 {
        let k3 = 3.0 * k as f64;
        tf = tf * x3 / ((k3 - 1.0) * k3);
        tg = tg * x3 / (k3 * (k3 + 1.0));
        tfp = tfp * x3 / (k3 * (k3 + 2.0));
        tgp = tgp * x3 / ((k3 - 2.0) * k3);
        f += tf;
        g += tg;
        fp += tfp;
        gp += tgp;
        let scale = f.hi().abs() + g.hi().abs() + fp.hi().abs() + gp.hi().abs();
        let last = tf.hi().abs() + tg.hi().abs() + tfp.hi().abs() + tgp.hi().abs();
        if last <= tiny * scale {
            break;
        }
    }
    let c1 = TwoFloat::new_add(AI0.0, AI0.1);
    let c2 = TwoFloat::new_add(MINUS_AIP0.0, MINUS_AIP0.1);
    let ai = c1 * f - c2 * g;
    let aip = c1 * fp - c2 * gp;
    (ai.hi() + ai.lo(), aip.hi() + aip.lo())
}

/// Coefficients `u_k` of the asymptotic expansions, `u_0 = 1`.
fn u_coeffs(n: usize) -> Vec<f64> {
    let mut u = vec![1.0; n];
    for k in 1..n {
        let fk = k as f64;
        u[k] = u[k - 1] * (6.0 * fk - 5.0) * (6.0 * fk - 3.0) * (6.0 * fk - 1.0)
            / ((2.0 * fk - 1.0) * 216.0 * fk);
    }
    u
}

fn v_from_u(u: &[f64]) -> Vec<f64> {
    u.iter()
        .enumerate()
        .map(|(k, &uk)| {
            if k == 0 {
                1.0
            } else {
                let fk = k as f64;
                -(6.0 * fk + 1.0) / (6.0 * fk - 1.0) * uk
            }
        })
        .collect()
}

fn asymptotic_pos(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let u = u_coeffs(40);
    let v = v_from_u(&u);
    let (mut su, mut sv) = (0.0, 0.0);
    let mut zpow = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..u.len() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let tu = sign * u[k] * zpow;
        let tv = sign * v[k] * zpow;
        if tu.abs() > prev {
            break;
        }
        prev = tu.abs();
        su += tu;
        sv += tv;
        if tu.abs() < 1e-17 * su.abs() {
            break;
        }
        zpow /= zeta;
    }
    let e = (-zeta).exp() / (2.0 * PI.sqrt());
    let q = x.sqrt().sqrt();
    (e / q * su, -e * q * sv)
}

fn asymptotic_neg(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let u = u_coeffs(40);
    let v = v_from_u(&u);
    let (mut pu, mut qu, mut pv, mut qv) = (0.0, 0.0, 0.0, 0.0);
    let mut zpow = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..u.len() {
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let tu = sign * u[k] * zpow;
        let tv = sign * v[k] * zpow;
        if tu.abs() > prev {
            break;
        }
        prev = tu.abs();
        if k % 2 == 0 {
            pu += tu;
            pv += tv;
        } else {
            qu += tu;
            qv += tv;
        }
        if tu.abs() < 1e-17 {
            break;
        }
        zpow /= zeta;
    }
    let phase = zeta - PI / 4.0;
    let (s, c) = phase.sin_cos();
    let q = x.sqrt().sqrt();
    let ai = (c * pu + s * qu) / (PI.sqrt() * q);
    let aip = q / PI.sqrt() * (s * pv - c * qv);
    (ai, aip)
}

/// Magnitude of the `(k+1)`-th zero of `Ai`, so `airy_zero(0) ≈ 2.338`.
pub fn airy_zero(k: usize) -> f64 {
    let t = 3.0 * PI / 8.0 * (4.0 * k as f64 + 3.0);
    let t2 = 1.0 / (t * t);
    let mut z = t.powf(2.0 / 3.0)
        * (1.0 + t2 * (5.0 / 48.0 - t2 * (5.0 / 36.0 - t2 * (77_125.0 / 82_944.0))));
    for _ in 0..50 {
        let (ai, aip) = airy(-z);
        // d/dz Ai(-z) = -Ai'(-z)
        let step = ai / aip;
        z += step;
        if step.abs() < 1e-15 * z {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn origin() {
        let (ai, aip) = airy(0.0);
        assert_relative_eq!(ai, 0.355_028_053_887_817_2, max_relative = 1e-15);
        assert_relative_eq!(aip, -0.258_819_403_792_806_8, max_relative = 1e-15);
    }

    #[test]
    fn branches_agree_at_switch() {
        for &x in &[SERIES_LIMIT - 1e-9, -SERIES_LIMIT + 1e-9] {
            let (a, ap) = maclaurin(x);
            let (b, bp) = if x > 0.0 { asymptotic_pos(x) } else { asymptotic_neg(-x) };
            assert_relative_eq!(a, b, max_relative = 1e-12);
            assert_relative_eq!(ap, bp, max_relative = 1e-12);
        }
    }

    #[test]
    fn first_zero_by_bisection() {
        let (mut lo, mut hi) = (2.0, 3.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if airy_ai(-mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((airy_zero(0) - 0.5 * (lo + hi)).abs() < 1e-12);
        assert!((airy_zero(0) - 2.338_107_410_459_767).abs() < 1e-12);
    }

    #[test]
    fn zeros_follow_asymptotic_phase() {
        for k in [20usize, 50, 200] {
            let z = airy_zero(k);
            let phase = 2.0 / 3.0 * z.powf(1.5);
            let t = PI * (k as f64 + 0.75);
            assert!((phase - t).abs() < 0.2 / t);
        }
    }
}
