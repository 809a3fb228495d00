//! Eigenvalues and origin coefficients next to their large-`k` laws.
//!
//! ```text
//! cargo run --release --example spectrum -- 0.5
//! ```

use bessel_excursion::spectrum::{dk_asymptotic, lambda_asymptotic, solve_spectrum};
use bessel_excursion::ExcursionParams;

fn main() -> bessel_excursion::Result<()> {
    let u0: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.5);
    let p = ExcursionParams::absorbing(u0)?;
    let s = solve_spectrum(&p, 20, 1e-10)?;
    println!("U0 = {u0}, |alpha| = {}", p.index());
    println!("{:>3} {:>16} {:>16} {:>14} {:>14}", "k", "lambda", "asymptotic", "d", "asymptotic");
    for k in 0..s.lambdas.len() {
        println!(
            "{k:>3} {:>16.10} {:>16.10} {:>14.8} {:>14.8}",
            s.lambdas[k],
            lambda_asymptotic(&p, k),
            s.dks[k],
            dk_asymptotic(&p, s.lambdas[k])
        );
    }
    Ok(())
}
