//! Bessel functions `J_ν`, `Y_ν`, `I_ν`, `K_ν` of real order and argument.
//!
//! Non-negative orders use Temme's series for small arguments and Steed's
//! continued fractions otherwise. Negative orders go through the reflection
//! formulas. Orders ±1/2 short-circuit to elementary closed forms.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::gamma::sin_pi;

const MAX_ITER: usize = 200_000;
const EPS: f64 = f64::EPSILON;
const FPMIN: f64 = f64::MIN_POSITIVE / f64::EPSILON;
const XMIN: f64 = 2.0;

const GAM1: [f64; 7] = [
    -1.142_022_680_371_168e0,
    6.516_511_267_073_7e-3,
    3.087_090_173_086e-4,
    -3.470_626_964_9e-6,
    6.943_766_4e-9,
    3.677_95e-11,
    -1.356e-13,
];
const GAM2: [f64; 8] = [
    1.843_740_587_300_905e0,
    -7.685_284_084_478_67e-2,
    1.271_927_136_654_6e-3,
    -4.971_736_704_2e-6,
    -3.312_611_98e-8,
    2.423_096e-10,
    -1.702e-13,
    -1.49e-15,
];

fn chebev(c: &[f64], x: f64) -> f64 {
    let mut d = 0.0;
    let mut dd = 0.0;
    for &cj in c[1..].iter().rev() {
        let sv = d;
        d = 2.0 * x * d - dd + cj;
        dd = sv;
    }
    x * d - dd + 0.5 * c[0]
}

/// `(γ₁, γ₂, 1/Γ(1+μ), 1/Γ(1-μ))` for `|μ| ≤ 1/2`.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let xx = 8.0 * mu * mu - 1.0;
    let g1 = chebev(&GAM1, xx);
    let g2 = chebev(&GAM2, xx);
    (g1, g2, g2 - mu * g1, g2 + mu * g1)
}

/// `(J_ν, Y_ν, J'_ν, Y'_ν)` for `ν ≥ 0`, `x > 0`.
fn jy(nu: f64, x: f64) -> Result<(f64, f64, f64, f64)> {
    let nl = if x < XMIN {
        (nu + 0.5) as i64
    } else {
        ((nu - x + 1.5) as i64).max(0)
    };
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..MAX_ITER {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() <= EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(format!("bessel J ratio at nu={nu}, x={x}")));
    }

    let mut rjl = isign * FPMIN;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let rjp1 = rjpl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let (rjmu, mut rymu, mut ry1);
    if x < XMIN {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = 2.0 / PI * fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let e = e.exp();
        let mut p = e / (gampl * PI);
        let mut q = 1.0 / (e * PI * gammi);
        let pimu2 = 0.5 * pimu;
        let fact3 = if pimu2.abs() < EPS { 1.0 } else { pimu2.sin() / pimu2 };
        let r = PI * pimu2 * fact3 * fact3;
        let mut c = 1.0;
        let d = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        let mut ok = false;
        for i in 1..MAX_ITER {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            c *= d / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = c * (ff + r * q);
            sum += del;
            let del1 = c * p - fi * del;
            sum1 += del1;
            if del.abs() < (1.0 + sum.abs()) * EPS {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::NoConvergence(format!("bessel Y series at nu={nu}, x={x}")));
        }
        rymu = -sum;
        ry1 = -sum1 * xi2;
        let rymup = xmu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
    } else {
        let mut a = 0.25 - xmu2;
        let mut p = -0.5 * xi;
        let mut q = 1.0;
        let br = 2.0 * x;
        let mut bi = 2.0;
        let mut fact = a * xi / (p * p + q * q);
        let mut cr = br + q * fact;
        let mut ci = bi + p * fact;
        let mut den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let mut temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        let mut ok = false;
        for i in 1..MAX_ITER {
            a += 2.0 * i as f64;
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < FPMIN {
                dr = FPMIN;
            }
            fact = a / (cr * cr + ci * ci);
            cr = br + cr * fact;
            ci = bi - ci * fact;
            if cr.abs() + ci.abs() < FPMIN {
                cr = FPMIN;
            }
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (dlr - 1.0).abs() + dli.abs() <= EPS {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::NoConvergence(format!("bessel J/Y fraction at nu={nu}, x={x}")));
        }
        let gam = (p - f) / q;
        let mut r = (w / ((p - f) * gam + q)).sqrt();
        if rjl < 0.0 {
            r = -r;
        }
        rjmu = r;
        rymu = rjmu * gam;
        let rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
    }

    let fact = rjmu / rjl;
    let j = rjl1 * fact;
    let jp = rjp1 * fact;
    for i in 1..=nl {
        let rytemp = (xmu + i as f64) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = rytemp;
    }
    let y = rymu;
    let yp = nu * xi * rymu - ry1;
    Ok((j, y, jp, yp))
}

/// `(e^{-x}I_ν, e^{x}K_ν)` for `ν ≥ 0`, `x > 0`.
fn ik_scaled(nu: f64, x: f64) -> Result<(f64, f64)> {
    if x > 1e4 {
        return Ok(ik_asymptotic(nu, x));
    }
    let nl = (nu + 0.5) as i64;
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;

    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..MAX_ITER {
        b += xi2;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() <= EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(format!("bessel I ratio at nu={nu}, x={x}")));
    }

    let mut ril = FPMIN;
    let mut ripl = h * ril;
    let ril1 = ril;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let ritemp = fact * ril + ripl;
        fact -= xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
    }
    let f = ripl / ril;

    // rkmu and rk1 carry the factor e^{x} in both branches.
    let (mut rkmu, mut rk1);
    if x < XMIN {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let e = e.exp();
        let mut p = 0.5 * e / gampl;
        let mut q = 0.5 / (e * gammi);
        let mut c = 1.0;
        let d = x2 * x2;
        let mut sum1 = p;
        let mut ok = false;
        for i in 1..MAX_ITER {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            c *= d / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = c * ff;
            sum += del;
            let del1 = c * (p - fi * ff);
            sum1 += del1;
            if del.abs() < sum.abs() * EPS {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::NoConvergence(format!("bessel K series at nu={nu}, x={x}")));
        }
        let ex = x.exp();
        rkmu = sum * ex;
        rk1 = sum1 * xi2 * ex;
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut h = d;
        let mut delh = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - xmu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        let mut ok = false;
        for i in 1..MAX_ITER {
            let fi = i as f64;
            a -= 2.0 * fi;
            c = -a * c / (fi + 1.0);
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh *= b * d - 1.0;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() <= EPS {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::NoConvergence(format!("bessel K fraction at nu={nu}, x={x}")));
        }
        h *= a1;
        rkmu = (PI / (2.0 * x)).sqrt() / s;
        rk1 = rkmu * (xmu + x + 0.5 - h) * xi;
    }

    let rkmup = xmu * xi * rkmu - rk1;
    let rimu = xi / (f * rkmu - rkmup);
    let i_scaled = rimu * ril1 / ril;
    for i in 1..=nl {
        let rktemp = (xmu + i as f64) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = rktemp;
    }
    Ok((i_scaled, rkmu))
}

fn ik_asymptotic(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut ti = 1.0;
    let mut tk = 1.0;
    let mut si = 1.0;
    let mut sk = 1.0;
    for k in 1..30 {
        let fk = k as f64;
        let m = 2.0 * fk - 1.0;
        let r = (mu - m * m) / (fk * 8.0 * x);
        ti *= -r;
        tk *= r;
        si += ti;
        sk += tk;
        if ti.abs() < EPS * si.abs() {
            break;
        }
    }
    (si / (2.0 * PI * x).sqrt(), sk * (PI / (2.0 * x)).sqrt())
}

fn is_half(nu: f64) -> bool {
    nu.abs() == 0.5
}

fn check_x(x: f64, what: &str) -> Result<()> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!("{what} requires x >= 0, got {x}")));
    }
    Ok(())
}

/// Bessel function of the first kind `J_ν(x)`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    check_x(x, "J_nu")?;
    if is_half(nu) && x > 0.0 {
        let s = (2.0 / (PI * x)).sqrt();
        return Ok(if nu > 0.0 { s * x.sin() } else { s * x.cos() });
    }
    if x == 0.0 {
        return if nu == 0.0 {
            Ok(1.0)
        } else if nu > 0.0 || nu == nu.floor() {
            Ok(0.0)
        } else {
            Err(Error::Domain(format!("J_{nu}(0) is unbounded")))
        };
    }
    if nu >= 0.0 {
        return Ok(jy(nu, x)?.0);
    }
    let m = -nu;
    let (j, y, _, _) = jy(m, x)?;
    if m == m.floor() {
        let sign = if (m as i64) % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(sign * j);
    }
    Ok(sin_pi(m + 0.5) * j - sin_pi(m) * y)
}

/// Bessel function of the second kind `Y_ν(x)`, `x > 0`.
pub fn bessel_y(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("Y_nu requires x > 0, got {x}")));
    }
    if nu >= 0.0 {
        return Ok(jy(nu, x)?.1);
    }
    let m = -nu;
    let (j, y, _, _) = jy(m, x)?;
    if m == m.floor() {
        let sign = if (m as i64) % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(sign * y);
    }
    Ok(sin_pi(m) * j + sin_pi(m + 0.5) * y)
}

/// Exponentially scaled modified Bessel function `e^{-x}I_ν(x)`.
pub fn bessel_i_scaled(nu: f64, x: f64) -> Result<f64> {
    check_x(x, "I_nu")?;
    if x == 0.0 {
        return if nu == 0.0 {
            Ok(1.0)
        } else if nu > 0.0 || nu == nu.floor() {
            Ok(0.0)
        } else {
            Err(Error::Domain(format!("I_{nu}(0) is unbounded")))
        };
    }
    if is_half(nu) {
        let s = 1.0 / (2.0 * PI * x).sqrt();
        let em = (-2.0 * x).exp();
        return Ok(if nu > 0.0 { s * (1.0 - em) } else { s * (1.0 + em) });
    }
    let m = nu.abs();
    let (i, k) = ik_scaled(m, x)?;
    if nu >= 0.0 || m == m.floor() {
        return Ok(i);
    }
    // I_{-m} = I_m + (2/π) sin(mπ) K_m
    Ok(i + 2.0 / PI * sin_pi(m) * k * (-2.0 * x).exp())
}

/// Modified Bessel function of the first kind `I_ν(x)`.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    Ok(bessel_i_scaled(nu, x)? * x.exp())
}

/// Exponentially scaled modified Bessel function `e^{x}K_ν(x)`, `x > 0`.
pub fn bessel_k_scaled(nu: f64, x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!("K_nu requires x > 0, got {x}")));
    }
    let m = nu.abs();
    if m == 0.5 {
        return Ok((PI / (2.0 * x)).sqrt());
    }
    Ok(ik_scaled(m, x)?.1)
}

/// Modified Bessel function of the second kind `K_ν(x)`, `x > 0`.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    Ok(bessel_k_scaled(nu, x)? * (-x).exp())
}
