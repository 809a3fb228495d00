//! Approach of the continued problem to the stable-law limit near `U0 = -3`.

use bessel_excursion::distribution::laplace_pdf_with_tol;
use bessel_excursion::levy_limit::{lambda0_coefficient, limit_fixed_spectrum, limit_laplace, limit_pdf_scaled};
use bessel_excursion::spectrum::solve_spectrum;
use bessel_excursion::ExcursionParams;

fn main() -> bessel_excursion::Result<()> {
    println!("reduced problem: {:?}", limit_fixed_spectrum(3)?);
    for u0 in [-2.9, -2.95, -2.99] {
        let p = ExcursionParams::continued(u0)?;
        let s = solve_spectrum(&p, 120, 1e-10)?;
        println!(
            "U0 = {u0}: lambda0/(U0+3) = {:.5} (limit {:.5}), lambda1 = {:.5}",
            s.lambdas[0] / (u0 + 3.0),
            lambda0_coefficient(),
            s.lambdas[1]
        );
        if u0 == -2.99 {
            for s_hat in [0.5, 1.0, 2.0, 4.0] {
                let full = laplace_pdf_with_tol(&p, &s, s_hat, 1e-3)?.0;
                println!("  s = {s_hat}: full {full:.6}, limit {:.6}", limit_laplace(u0, s_hat)?);
            }
        }
    }
    println!("limit density at A/A0 = 1e-3: {:.6e}", limit_pdf_scaled(-2.99, 1e-3)?);
    Ok(())
}
