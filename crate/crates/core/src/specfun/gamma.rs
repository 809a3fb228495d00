//! Gamma function, its logarithm, the regularized incomplete gamma function
//! and the Hurwitz zeta function.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `sin(πx)` with exact argument reduction, zero at every integer.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x).round();
    let (r, sign) = if r < 0.0 { (-r, -1.0) } else { (r, 1.0) };
    let r = if r > 0.5 { 1.0 - r } else { r };
    sign * (PI * r).sin()
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

fn lanczos_sum(xm1: f64) -> f64 {
    let mut s = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        s += c / (xm1 + i as f64);
    }
    s
}

/// Γ(x) for real `x`; overflows to infinity above about 171.6.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain("gamma of NaN".into()));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(format!("gamma at {x}")));
    }
    if x < 0.5 {
        return Ok(PI / (sin_pi(x) * gamma(1.0 - x)?));
    }
    if x == x.floor() && x <= 23.0 {
        let mut f = 1.0;
        let mut k = 2.0;
        while k < x {
            f *= k;
            k += 1.0;
        }
        return Ok(f);
    }
    let xm1 = x - 1.0;
    let t = xm1 + LANCZOS_G + 0.5;
    let half = t.powf(0.5 * (xm1 + 0.5));
    Ok((2.0 * PI).sqrt() * half * (-t).exp() * half * lanczos_sum(xm1))
}

/// ln|Γ(x)|.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain("ln_gamma of NaN".into()));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(format!("ln_gamma at {x}")));
    }
    if x < 0.5 {
        return Ok((PI / sin_pi(x).abs()).ln() - ln_gamma(1.0 - x)?);
    }
    if x < 15.0 {
        return Ok(gamma(x)?.abs().ln());
    }
    let xm1 = x - 1.0;
    let t = xm1 + LANCZOS_G + 0.5;
    Ok(LN_SQRT_2PI + (xm1 + 0.5) * t.ln() - t + lanczos_sum(xm1).ln())
}

/// `1/Γ(x)`, entire, zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    match gamma(x) {
        Ok(g) => 1.0 / g,
        Err(_) => f64::NAN,
    }
}

/// Pochhammer symbol `(a)_n` for non-negative integer `n`.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |p, k| p * (a + k as f64))
}

const INC_MAX_ITER: usize = 100_000;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `ln Γ(1+a)` for `|a| ≤ 1/2` from its Taylor series in `a`.
fn ln_gamma_1p_small(a: f64) -> f64 {
    static ZETA: std::sync::OnceLock<Vec<f64>> = std::sync::OnceLock::new();
    let zeta = ZETA.get_or_init(|| {
        (2..64).map(|k| hurwitz_zeta(k as f64, 1.0).expect("s > 1")).collect()
    });
    let mut sum = 0.0;
    let mut pow = -a;
    for (i, z) in zeta.iter().enumerate() {
        pow *= -a;
        let k = (i + 2) as f64;
        let term = z * pow / k;
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA * a + sum
}

/// `Q(a, x)` for `a < 1/2` and `x < a + 1`, avoiding the subtraction `1 - P`.
fn gamma_q_small_a(a: f64, x: f64) -> Result<f64> {
    let lg = ln_gamma_1p_small(a);
    let g1pm1 = lg.exp_m1();
    let powm1 = (a * x.ln()).exp_m1();
    let mut upper = (g1pm1 - powm1) / a;
    // minus Σ_{n≥1} (-1)^n x^{a+n} / (n! (a+n))
    let xa = (a * x.ln()).exp();
    let mut fact = 1.0;
    for n in 1..200 {
        let fnn = n as f64;
        fact *= -x / fnn;
        let term = xa * fact / (a + fnn);
        upper -= term;
        if term.abs() < 1e-17 * upper.abs() {
            break;
        }
    }
    Ok(upper * a / lg.exp())
}

/// Regularized upper incomplete gamma `Q(a, x) = Γ(a, x)/Γ(a)`.
pub fn gamma_q(a: f64, x: f64) -> Result<f64> {
    check_incomplete(a, x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    if a < 0.5 && x < a + 1.0 {
        return gamma_q_small_a(a, x);
    }
    if x < a + 1.0 {
        Ok(1.0 - lower_series(a, x)?)
    } else {
        upper_fraction(a, x)
    }
}

/// Regularized lower incomplete gamma `P(a, x) = 1 - Q(a, x)`.
pub fn gamma_p(a: f64, x: f64) -> Result<f64> {
    check_incomplete(a, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x < a + 1.0 {
        lower_series(a, x)
    } else {
        Ok(1.0 - upper_fraction(a, x)?)
    }
}

fn check_incomplete(a: f64, x: f64) -> Result<()> {
    if !(a > 0.0) || !(x >= 0.0) {
        return Err(Error::Domain(format!("incomplete gamma needs a > 0, x >= 0 (a={a}, x={x})")));
    }
    Ok(())
}

fn prefactor(a: f64, x: f64) -> Result<f64> {
    Ok((-x + a * x.ln() - ln_gamma(a)?).exp())
}

fn lower_series(a: f64, x: f64) -> Result<f64> {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..INC_MAX_ITER {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * f64::EPSILON {
            return Ok(sum * prefactor(a, x)?);
        }
    }
    Err(Error::NoConvergence(format!("incomplete gamma series at a={a}, x={x}")))
}

fn upper_fraction(a: f64, x: f64) -> Result<f64> {
    let tiny = f64::MIN_POSITIVE / f64::EPSILON;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..INC_MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() <= f64::EPSILON {
            return Ok(prefactor(a, x)? * h);
        }
    }
    Err(Error::NoConvergence(format!("incomplete gamma fraction at a={a}, x={x}")))
}

const BERNOULLI_OVER_FACT: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
];

/// Hurwitz zeta `ζ(s, q) = Σ_{k≥0} (k+q)^{-s}` for `s > 1`, `q > 0`.
pub fn hurwitz_zeta(s: f64, q: f64) -> Result<f64> {
    if !(s > 1.0) || !(q > 0.0) {
        return Err(Error::Domain(format!("hurwitz zeta needs s > 1, q > 0 (s={s}, q={q})")));
    }
    const N: usize = 12;
    let mut sum = 0.0;
    for k in 0..N {
        sum += (k as f64 + q).powf(-s);
    }
    let w = N as f64 + q;
    sum += w.powf(1.0 - s) / (s - 1.0) + 0.5 * w.powf(-s);
    // Euler-Maclaurin corrections B_{2j}/(2j)! · s(s+1)…(s+2j-2) · w^{-s-2j+1}
    let mut rising = s;
    let mut wpow = w.powf(-s - 1.0);
    for (j, b) in BERNOULLI_OVER_FACT.iter().enumerate() {
        let term = b * rising * wpow;
        sum += term;
        let m = 2.0 * j as f64;
        rising *= (s + m + 1.0) * (s + m + 2.0);
        wpow /= w * w;
    }
    Ok(sum)
}
