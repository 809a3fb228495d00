//! The one-sided stable law of index 2/3 in its four representations.

use bessel_excursion::distribution::{levy23, LevyForm};

fn main() {
    for x in [0.05, 0.1, 0.5, 1.0, 3.0, 10.0] {
        let v: Vec<String> = LevyForm::ALL.iter().map(|&f| format!("{:.15e}", levy23(x, f))).collect();
        println!("x = {x:5}: {}", v.join("  "));
    }
}
