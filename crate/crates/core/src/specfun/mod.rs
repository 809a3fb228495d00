//! Special functions used throughout the crate.
//!
//! Every function is pure and thread-safe.

pub mod airy;
pub mod bessel;
pub mod gamma;
pub mod hyper;
pub mod kummer;

pub use airy::{airy, airy_ai, airy_ai_prime, airy_zero};
pub use bessel::{bessel_i, bessel_i_scaled, bessel_j, bessel_k, bessel_k_scaled, bessel_y};
pub use gamma::{gamma, gamma_p, gamma_q, hurwitz_zeta, ln_gamma, rgamma};
pub use hyper::{hyp1f1, hyp_pfq, hyp_pfq_in, AccuracyDomain, HypValue};
pub use kummer::{kummer_u, kummer_u_prime};
