//! The transform `P̃(ŝ)`, the mean from its slope at the origin, and the
//! free propagator.

use bessel_excursion::distribution::{g0_propagator, laplace_pdf, mean_from_laplace};
use bessel_excursion::moments::m1_closed;
use bessel_excursion::spectrum::solve_spectrum;
use bessel_excursion::ExcursionParams;

fn main() -> bessel_excursion::Result<()> {
    let p = ExcursionParams::absorbing(1.0)?;
    let s = solve_spectrum(&p, 120, 1e-10)?;
    for s_hat in [0.0, 0.25, 0.5, 1.0, 2.0, 4.0] {
        println!("P~({s_hat}) = {:.12}", laplace_pdf(&p, &s, s_hat)?);
    }
    let (mean, err) = mean_from_laplace(&p, &s)?;
    println!("-dP~/ds at 0 = {mean:.9} +- {err:.1e}; closed form {:.9}", m1_closed(&p)? / p.a0());
    println!("G0(1, 0.5; T = 1) = {:.10}", g0_propagator(1.0, 0.5, 1.0, &p)?);
    Ok(())
}
