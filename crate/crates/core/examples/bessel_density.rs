//! Density tables for several drifts, by the real-space series and by
//! contour inversion, written as CSV.

use bessel_excursion::distribution::{log_grid, DistributionTable, Method};
use bessel_excursion::spectrum::solve_spectrum;
use bessel_excursion::ExcursionParams;

fn main() -> bessel_excursion::Result<()> {
    let grid = log_grid(0.5, 3.0, 11)?;
    for u0 in [-1.0, 0.0, 2.5] {
        let p = ExcursionParams::absorbing(u0)?;
        let s = solve_spectrum(&p, 120, 1e-10)?;
        let hyp = DistributionTable::compute(&p, &s, &grid, Method::HypSeries)?;
        let tal = DistributionTable::compute(&p, &s, &grid, Method::Talbot)?;
        let worst = hyp.pdf_scaled.iter().zip(&tal.pdf_scaled).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        println!("U0 = {u0}: largest series/inversion difference {worst:.2e}");
        if u0 == 2.5 {
            hyp.write_csv(std::io::stdout())?;
        }
    }
    Ok(())
}
