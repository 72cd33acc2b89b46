//! Numerical laboratory for the weighted critical-line integral
//! I(T) = ∫_{-T}^{T} log|ζ(1/2+it)| / (1/4+t²) dt and its companions.

pub mod argument;
pub mod arith;
pub mod cli;
pub mod config;
pub mod dd;
pub mod dirichlet;
pub mod error;
pub mod integral;
pub mod precision;
pub mod quad;
pub mod report;
pub mod resonator;
pub mod scan;
pub mod zeros;
pub mod zeta;

pub use error::{Error, Result};
pub use precision::PrecisionConfig;
