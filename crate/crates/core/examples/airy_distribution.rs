//! The Brownian case `U0 = 0`: closed-form density and its first moments.

use bessel_excursion::distribution::{airy_forms, default_grid, DistributionTable, Method};
use bessel_excursion::moments::moment_quadrature;
use bessel_excursion::spectrum::solve_spectrum;
use bessel_excursion::ExcursionParams;

fn main() -> bessel_excursion::Result<()> {
    let p = ExcursionParams::absorbing(0.0)?;
    let s = solve_spectrum(&p, 120, 1e-10)?;
    for a_hat in [0.3, 0.6, 1.0, 1.5, 2.5] {
        let (kummer, airy, _) = airy_forms(&p, &s, a_hat)?;
        println!("A/A0 = {a_hat:4}: {kummer:.12e}  (Airy-function form {airy:.12e})");
    }
    let table = DistributionTable::compute(&p, &s, &default_grid(), Method::AiryClosed)?;
    println!("normalization {:.8}", moment_quadrature(&table, 0.0)?);
    println!("mean          {:.8}  (sqrt(pi)/2 = {:.8})", moment_quadrature(&table, 1.0)?, std::f64::consts::PI.sqrt() / 2.0);
    println!("second moment {:.8}  (5/6)", moment_quadrature(&table, 2.0)?);
    Ok(())
}
