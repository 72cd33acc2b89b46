//! Quadrature: Gauss-Legendre and Gauss-Kronrod rules, a globally adaptive
//! integrator, and graded-mesh integration of logarithmic singularities.

mod adaptive;
mod graded;
mod rules;

pub use adaptive::{integrate, integrate_with_breaks, QuadOutcome, QuadValue};
pub use graded::{log_singular_integral, BsyWeight, SingularQuad, UnitWeight, Weight};
pub use rules::{gauss_legendre, gk15, gk21, GaussLegendre};
