//! First and second moments against the drift, with the linear law for
//! the second.

use bessel_excursion::moments::{m2_linear, m2_series_detail, MomentSet};
use bessel_excursion::ExcursionParams;

fn main() -> bessel_excursion::Result<()> {
    println!("{:>6} {:>12} {:>14} {:>10} {:>12} {:>12}", "U0", "M1/A0", "M2/A0^2", "err", "linear", "M_nu/A0^nu");
    for u0 in [-0.5, 0.0, 1.0, 2.0, 3.0, 5.0] {
        let p = ExcursionParams::absorbing(u0)?;
        let m = MomentSet::analytic(&p, 1e-8)?;
        let detail = m2_series_detail(&p, 1e-8)?;
        let a2 = p.a0() * p.a0();
        println!(
            "{u0:>6} {:>12.9} {:>14.11} {:>10.1e} {:>12.9} {:>12.9}",
            m.m1,
            m.m2,
            detail.err / a2,
            m2_linear(&p) / a2,
            m.m_nu
        );
    }
    Ok(())
}
