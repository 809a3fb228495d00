//! Generic numerical building blocks: quadrature, ODE integration and root finding.

pub mod ode;
pub mod quad;
pub mod roots;
pub mod taylor;
