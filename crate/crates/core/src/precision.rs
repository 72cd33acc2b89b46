//! Precision knobs shared by all numerical routines.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub const MAX_EULER_MACLAURIN_TERMS: usize = 120;
pub const MAX_RS_CORRECTION_TERMS: usize = 4;
pub const MAX_SUBDIVISIONS: usize = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionConfig {
    /// Absolute error target for pointwise evaluations of zeta, Z and theta.
    pub target_abs_error: f64,
    /// Upper bound on the number of Bernoulli correction terms in Euler-Maclaurin.
    pub euler_maclaurin_terms: usize,
    /// Number of Riemann-Siegel correction terms C_1..C_k beyond the leading C_0.
    pub rs_correction_terms: usize,
    /// Absolute tolerance for each integral as a whole.
    pub quad_tol: f64,
    /// Cap on the total number of quadrature subintervals of one integral.
    pub max_subdivisions: usize,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig {
            target_abs_error: 1e-10,
            euler_maclaurin_terms: 60,
            rs_correction_terms: 4,
            quad_tol: 1e-10,
            max_subdivisions: 2_000_000,
        }
    }
}

impl PrecisionConfig {
    pub fn new(
        target_abs_error: f64,
        euler_maclaurin_terms: usize,
        rs_correction_terms: usize,
        quad_tol: f64,
        max_subdivisions: usize,
    ) -> Result<Self> {
        let cfg = PrecisionConfig {
            target_abs_error,
            euler_maclaurin_terms,
            rs_correction_terms,
            quad_tol,
            max_subdivisions,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.target_abs_error > 0.0 && self.target_abs_error.is_finite()) {
            return Err(Error::InvalidInput("target_abs_error must be positive".into()));
        }
        if !(self.quad_tol > 0.0 && self.quad_tol.is_finite()) {
            return Err(Error::InvalidInput("quad_tol must be positive".into()));
        }
        if self.target_abs_error > self.quad_tol {
            return Err(Error::InvalidInput("target_abs_error must not exceed quad_tol".into()));
        }
        if self.euler_maclaurin_terms == 0 || self.euler_maclaurin_terms > MAX_EULER_MACLAURIN_TERMS {
            return Err(Error::InvalidInput(format!(
                "euler_maclaurin_terms must lie in 1..={MAX_EULER_MACLAURIN_TERMS}"
            )));
        }
        if self.rs_correction_terms > MAX_RS_CORRECTION_TERMS {
            return Err(Error::InvalidInput(format!(
                "rs_correction_terms must lie in 0..={MAX_RS_CORRECTION_TERMS}"
            )));
        }
        if self.max_subdivisions == 0 || self.max_subdivisions > MAX_SUBDIVISIONS {
            return Err(Error::InvalidInput(format!(
                "max_subdivisions must lie in 1..={MAX_SUBDIVISIONS}"
            )));
        }
        Ok(())
    }

    /// Tighten both tolerances by `factor` (> 1), keeping the term budgets.
    pub fn refined(&self, factor: f64) -> Self {
        PrecisionConfig {
            target_abs_error: self.target_abs_error / factor,
            quad_tol: self.quad_tol / factor,
            ..*self
        }
    }

    /// Zero-proximity threshold for |Z(t)|.
    pub fn near_zero_threshold(&self) -> f64 {
        10.0 * self.target_abs_error
    }
}
