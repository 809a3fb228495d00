//! Eigenpairs against Airy zeros, a finite-difference oracle and the
//! asymptotic laws.

use std::f64::consts::PI;

use bessel_excursion::levy_limit::limit_fixed_spectrum;
use bessel_excursion::specfun::airy_zero;
use bessel_excursion::spectrum::{dk_asymptotic, lambda_asymptotic, solve_spectrum};
use bessel_excursion::{BoundaryMode, Error, ExcursionParams};

fn absorbing(u0: f64) -> ExcursionParams {
    ExcursionParams::absorbing(u0).unwrap()
}

// tests/oracles/spectrum_fd.py, Richardson-extrapolated finite differences
const FD_INDEX_ONE: [f64; 5] = [2.872097735582, 4.493018208295, 5.867116815521, 7.097765063175, 8.230575399979];
const FD_INDEX_SEVEN_QUARTERS: [f64; 5] = [3.592962249204, 5.075262045265, 6.375418005570, 7.558203727652, 8.656686761773];

#[test]
fn brownian_case_is_airy() {
    let s = solve_spectrum(&absorbing(0.0), 3, 1e-10).unwrap();
    for (k, want) in [2.3381074, 4.0879494, 5.5205598].iter().enumerate() {
        assert!((s.lambdas[k] - want).abs() < 1e-7);
        assert!((s.lambdas[k] - airy_zero(k)).abs() < 1e-8);
        assert!((s.dks[k] * s.dks[k] - 1.0).abs() < 1e-6);
    }
}

#[test]
fn finite_difference_oracle() {
    for (u0, want) in [(1.0, FD_INDEX_ONE), (2.5, FD_INDEX_SEVEN_QUARTERS)] {
        let s = solve_spectrum(&absorbing(u0), 5, 1e-10).unwrap();
        for (k, (got, want)) in s.lambdas.iter().zip(want).enumerate() {
            assert!((got - want).abs() < 5e-8, "U0 = {u0}, k = {k}: {got} vs {want}");
        }
    }
}

#[test]
fn mirrored_drift_has_the_same_spectrum() {
    for u0 in [0.0, 0.5, 2.5] {
        let a = solve_spectrum(&absorbing(u0), 8, 1e-10).unwrap();
        let b = solve_spectrum(&absorbing(-2.0 - u0), 8, 1e-10).unwrap();
        for k in 0..8 {
            assert!((a.lambdas[k] - b.lambdas[k]).abs() <= 1e-10 * a.lambdas[k]);
            assert!((a.dks[k] - b.dks[k]).abs() <= 1e-9 * a.dks[k]);
        }
    }
}

#[test]
fn eigenvalues_increase_and_gaps_shrink() {
    let p = absorbing(2.5);
    let s = solve_spectrum(&p, 41, 1e-10).unwrap();
    let gaps: Vec<f64> = s.lambdas.windows(2).map(|w| w[1] - w[0]).collect();
    assert!(gaps.iter().all(|&g| g > 0.0));
    assert!(gaps.windows(2).all(|g| g[1] < g[0]));
    let rel = |k: usize| (s.lambdas[k] - lambda_asymptotic(&p, k)).abs() / s.lambdas[k];
    assert!(rel(10) > rel(20) && rel(20) > rel(40));
    assert!(rel(20) < 0.01);
}

#[test]
fn shift_law_for_large_k() {
    let airy = solve_spectrum(&absorbing(0.0), 30, 1e-10).unwrap();
    for u0 in [-1.0, 0.5, 2.5] {
        let s = solve_spectrum(&absorbing(u0), 30, 1e-10).unwrap();
        for k in 10..30 {
            let l0 = airy.lambdas[k];
            let shift = (s.lambdas[k] - l0) / u0;
            let want = PI / (4.0 * l0.sqrt());
            assert!((shift / want - 1.0).abs() < 0.05, "U0 = {u0}, k = {k}: {shift} vs {want}");
        }
    }
}

#[test]
fn origin_coefficients_follow_their_law() {
    for (u0, from) in [(-1.0, 2), (-0.5, 2), (0.5, 2), (1.0, 3)] {
        let p = absorbing(u0);
        let s = solve_spectrum(&p, 20, 1e-10).unwrap();
        for k in from..20 {
            let want = dk_asymptotic(&p, s.lambdas[k]);
            assert!((s.dks[k] / want - 1.0).abs() < 0.02, "U0 = {u0}, k = {k}");
        }
    }
    let p = absorbing(2.5);
    let s = solve_spectrum(&p, 21, 1e-10).unwrap();
    assert!((s.dks[20] / dk_asymptotic(&p, s.lambdas[20]) - 1.0).abs() < 0.05);
    assert!((s.lambdas[20] / lambda_asymptotic(&p, 20) - 1.0).abs() < 0.01);
}

#[test]
fn reduced_limit_problem_is_index_one() {
    let fixed = limit_fixed_spectrum(5).unwrap();
    for k in 0..5 {
        assert!((fixed[k] - FD_INDEX_ONE[k]).abs() < 5e-8);
    }
}

#[test]
fn continued_mode_ground_state_is_small() {
    let s = solve_spectrum(&ExcursionParams::continued(-2.9).unwrap(), 5, 1e-10).unwrap();
    assert!(s.lambdas[0] > 0.0 && s.lambdas[0] < 0.2);
    assert_eq!(s.params.mode, BoundaryMode::Continued);
}

#[test]
fn invalid_requests() {
    let p = absorbing(0.0);
    assert!(matches!(solve_spectrum(&p, 0, 1e-10), Err(Error::InvalidParameter(_))));
    assert!(matches!(solve_spectrum(&p, 3, 1e-2), Err(Error::InvalidParameter(_))));
    assert!(ExcursionParams::new(0.0, 0.5, 1.0, BoundaryMode::Continued).is_err());
}
