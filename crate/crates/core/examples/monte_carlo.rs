//! A small Langevin ensemble against the analytic density.
//!
//! ```text
//! cargo run --release --example monte_carlo -- 1.0 20000
//! ```

use bessel_excursion::cli::reference_table;
use bessel_excursion::mcsim::{mc_vs_analytic, sample_excursions, McConfig};
use bessel_excursion::ExcursionParams;

fn main() -> bessel_excursion::Result<()> {
    let mut args = std::env::args().skip(1);
    let u0: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.0);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(5000);
    let p = ExcursionParams::absorbing(u0)?;
    let ensemble = sample_excursions(&McConfig::new(p, n, 2024)?)?;
    let (_, table) = reference_table(&p)?;
    let r = mc_vs_analytic(&ensemble, &table)?;
    println!("U0 = {u0}, {n} excursions, acceptance {:.3e} per launch", ensemble.acceptance_rate);
    println!("KS {:.4} (1% critical {:.4})", r.ks, r.ks_critical);
    println!("mean {:.4} vs {:.4} (z = {:+.2})", r.m1_mc, r.m1_table, r.z_m1);
    println!("second moment {:.4} vs {:.4} (z = {:+.2})", r.m2_mc, r.m2_table, r.z_m2);
    Ok(())
}
