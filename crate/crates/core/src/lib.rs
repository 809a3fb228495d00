//! Area distribution of Bessel excursions.
//!
//! A Bessel excursion is a path of the diffusion `dx = -D U0/x dt + √(2D) dW`
//! that leaves the origin and first returns at time `T`. This crate computes
//! the law of its area `A = ∫ x dt` from the spectrum of the rescaled
//! operator `-d²/dx² + c/x² + x`, evaluates it in real space and in Laplace
//! space, derives its moments, follows the `U0 → -3` limit to the one-sided
//! Lévy 2/3 law, and checks everything against a Langevin Monte Carlo.

#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod distribution;
pub mod error;
pub mod levy_limit;
pub mod mcsim;
pub mod moments;
pub mod numerics;
pub mod params;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
pub use params::{BoundaryMode, ExcursionParams};
