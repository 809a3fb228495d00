//! One-sided Lévy stable density of index 2/3, `L̃(s) = e^{-s^{2/3}}`.
//!
//! Four independent representations are provided so they can be played
//! against each other. With `y = 4/(27x²)`:
//!
//! * Whittaker: `√(3/π) x^{-1} e^{-y/2} W_{-1/2,1/6}(y)`, evaluated from its
//!   integral representation after the substitution `t = (w/y^{1/6})^6`.
//! * Kummer: `2^{4/3} 3^{-3/2} π^{-1/2} x^{-7/3} e^{-y} U(1/6, 4/3, y)`.
//! * Airy: `6 ζ^{7/4} (Ai(ζ) - Ai'(ζ)/√ζ) e^{-2ζ^{3/2}/3}` with `ζ = (3x)^{-4/3}`.
//! * Hypergeometric: two `1F1` series whose sum cancels by roughly `e^{y}`;
//!   they are summed in big-float arithmetic sized to that cancellation.

use std::f64::consts::PI;
use std::str::FromStr;

use dashu_float::round::mode::HalfAway;
use dashu_float::{DBig, FBig};
use serde::{Deserialize, Serialize};

use crate::numerics::quad::{integrate, QuadOptions};
use crate::specfun::{airy, kummer_u};

type Big = FBig<HalfAway, 2>;

const GAMMA_5_3: f64 = 0.902_745_292_950_933_6;
const GAMMA_1_6: f64 = 5.566_316_001_780_235;
const GAMMA_1_3_DIGITS: &str = "2.678938534707747633655692940974677644128689377957301100950428327590418";
const PI_DIGITS: &str = "3.141592653589793238462643383279502884197169399375105820974944592307816";

/// Representation used by [`levy23`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LevyForm {
    WhittakerW,
    KummerU,
    AiryForm,
    HypSeries,
}

impl LevyForm {
    pub const ALL: [LevyForm; 4] = [LevyForm::WhittakerW, LevyForm::KummerU, LevyForm::AiryForm, LevyForm::HypSeries];
}

/// Density `L_{2/3,1}(x)`; zero for `x ≤ 0`, NaN if an internal evaluation fails.
pub fn levy23(x: f64, form: LevyForm) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 {
        return 0.0;
    }
    let y = 4.0 / (27.0 * x * x);
    // e^{-y} underflows long before any representation loses meaning
    if y > 745.0 {
        return 0.0;
    }
    match form {
        LevyForm::WhittakerW => whittaker(x, y),
        LevyForm::KummerU => kummer(x, y),
        LevyForm::AiryForm => airy_form(x),
        LevyForm::HypSeries => hyp_series(x, y),
    }
}

fn whittaker(x: f64, y: f64) -> f64 {
    let y6 = y.powf(1.0 / 6.0);
    let mut points = vec![0.0, 0.5, 1.0, 1.5, 2.0, 3.0];
    if y6 < 3.0 {
        points.push(y6);
        points.sort_by(f64::total_cmp);
    }
    let opts = QuadOptions { abs_tol: 0.0, rel_tol: 1e-14, max_intervals: 500 };
    let f = |w: f64| {
        let w6 = w.powi(6);
        (-w6).exp() * (1.0 + w6 / y).powf(1.0 / 6.0)
    };
    // beyond w = 3 the integrand is below e^{-729}
    match integrate(f, &points, &opts) {
        Ok(j) => (3.0 / PI).sqrt() / x * (-y).exp() * y.sqrt() * 6.0 / GAMMA_1_6 * j.value,
        Err(_) => f64::NAN,
    }
}

fn kummer(x: f64, y: f64) -> f64 {
    let pref = 2f64.powf(4.0 / 3.0) / (3f64.powf(1.5) * PI.sqrt() * x.powf(7.0 / 3.0));
    kummer_u(1.0 / 6.0, 4.0 / 3.0, y).map_or(f64::NAN, |u| pref * (-y).exp() * u)
}

fn airy_form(x: f64) -> f64 {
    let zeta = (3.0 * x).powf(-4.0 / 3.0);
    let (ai, aip) = airy(zeta);
    6.0 * zeta.powf(1.75) * (ai - aip / zeta.sqrt()) * (-2.0 / 3.0 * zeta * zeta.sqrt()).exp()
}

fn big(v: f64, prec: usize) -> Big {
    Big::try_from(v).expect("finite").with_precision(prec).value()
}

fn big_const(digits: &str, prec: usize) -> Big {
    DBig::from_str(digits).expect("valid literal").with_base::<2>().value().with_precision(prec).value()
}

/// `1F1(a; b; y)` by direct summation at working precision.
fn m_series(a: &Big, b: &Big, y: &Big, prec: usize) -> Big {
    let one = big(1.0, prec);
    let mut term = one.clone();
    let mut sum = one.clone();
    let mut n = big(0.0, prec);
    let yf = y.to_f64().value();
    let eps = 2f64.powi(-(prec as i32));
    for k in 0.. {
        term = term * (a + &n) * y / ((b + &n) * (&n + &one));
        sum += &term;
        n += &one;
        let (t, s) = (term.to_f64().value().abs(), sum.to_f64().value().abs());
        if k as f64 > yf && t <= eps * s {
            break;
        }
    }
    sum
}

fn hyp_series(x: f64, y: f64) -> f64 {
    let prec = 160 + (y * std::f64::consts::LOG2_E).ceil() as usize;
    let xb = big(x, prec);
    let yb = big(4.0, prec) / (big(27.0, prec) * &xb * &xb);
    let third = big(1.0, prec) / big(3.0, prec);
    let sixth = big(1.0, prec) / big(6.0, prec);
    let f1 = m_series(&-sixth.clone(), &(&third + &third), &yb, prec);
    let f2 = m_series(&sixth, &(big(1.0, prec) + &third), &yb, prec);
    // r = Γ(7/3)/(2Γ(5/3)) = Γ(1/3)²√3/(6π)
    let mut root3 = big(3f64.sqrt(), prec);
    let mut cbrt = big(x.cbrt(), prec);
    for _ in 0..4 {
        root3 = (&root3 + big(3.0, prec) / &root3) / big(2.0, prec);
        cbrt = &cbrt - (&cbrt * &cbrt * &cbrt - &xb) / (big(3.0, prec) * &cbrt * &cbrt);
    }
    let g13 = big_const(GAMMA_1_3_DIGITS, prec);
    let r = &g13 * &g13 * root3 / (big(6.0, prec) * big_const(PI_DIGITS, prec));
    let bracket = f1 + r * f2 / (&cbrt * &cbrt);
    let pref = (2.0 * PI / 3.0).sin() * GAMMA_5_3 / (PI * x.powf(5.0 / 3.0));
    pref * (-y).exp() * bracket.to_f64().value()
}
