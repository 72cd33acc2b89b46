//! ζ(s), Hardy's Z function, the theta function and log ζ on the standard
//! branch.
//!
//! Evaluation uses Euler-Maclaurin summation in general and the
//! Riemann-Siegel formula on the critical line once its error bound is below
//! the requested target. Every value carries an absolute error bound.

mod branch;
mod em;
mod rs;
mod theta;

pub use branch::log_zeta_branch;
pub use em::{zeta_em, zeta_em_vertical};
pub use rs::{riemann_siegel_z, rs_coefficient, rs_error_bound, RS_T_MIN};
pub use theta::{ln_gamma, rs_theta, theta, theta_error_bound, theta_mod_two_pi, THETA_T_MIN};

use crate::error::{Error, Result};
use crate::precision::PrecisionConfig;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// |s - 1| below this raises `PoleAt1`.
pub const POLE_THRESHOLD: f64 = 1e-3;

/// Riemann-Siegel is only selected automatically from this height on.
pub const RS_AUTO_T_MIN: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub sigma: f64,
    pub t: f64,
}

impl ComplexPoint {
    pub const fn new(sigma: f64, t: f64) -> Self {
        ComplexPoint { sigma, t }
    }

    pub fn conj(self) -> Self {
        ComplexPoint {
            sigma: self.sigma,
            t: -self.t,
        }
    }
}

impl From<ComplexPoint> for Complex64 {
    fn from(p: ComplexPoint) -> Self {
        Complex64::new(p.sigma, p.t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaValue {
    pub value: Complex64,
    pub error_bound: f64,
    /// Length of the Euler-Maclaurin main sum.
    pub terms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZMethod {
    RiemannSiegel,
    EulerMaclaurin,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZValue {
    pub value: f64,
    pub error_bound: f64,
    /// Imaginary part of e^{iθ} ζ(1/2+it) before it is discarded (zero on the
    /// Riemann-Siegel path, which produces a real number by construction).
    pub imag_residue: f64,
    pub method: ZMethod,
}

/// Z(t) with error bound and the method that produced it.
pub fn hardy_z_value(t: f64, cfg: &PrecisionConfig) -> Result<ZValue> {
    if !t.is_finite() {
        return Err(Error::InvalidInput("t must be finite".into()));
    }
    let t = t.abs();
    let target = cfg.target_abs_error;
    if t >= RS_AUTO_T_MIN && rs_error_bound(t, cfg.rs_correction_terms) <= 0.5 * target {
        let z = riemann_siegel_z(t, cfg.rs_correction_terms)?;
        if z.error_bound <= target {
            return Ok(z);
        }
    }
    hardy_z_em(t, 0.9 * target, cfg.euler_maclaurin_terms)
}

/// Z(t) through Euler-Maclaurin and the exact theta function.
pub fn hardy_z_em(t: f64, target: f64, max_terms: usize) -> Result<ZValue> {
    let t = t.abs();
    let z = em::zeta_em_target(ComplexPoint::new(0.5, t), target, max_terms)?;
    let th = theta_mod_two_pi(t);
    let rot = Complex64::from_polar(1.0, th) * z.value;
    Ok(ZValue {
        value: rot.re,
        error_bound: z.error_bound + z.value.norm() * theta_error_bound(t),
        imag_residue: rot.im,
        method: ZMethod::EulerMaclaurin,
    })
}

/// Hardy's Z(t), automatically choosing the evaluation method.
pub fn hardy_z(t: f64, cfg: &PrecisionConfig) -> Result<f64> {
    hardy_z_value(t, cfg).map(|z| z.value)
}

/// log|ζ(1/2 + it)| = log|Z(t)|.
///
/// Fails with `NearZeroOrdinate` when |Z(t)| is below ten times the target
/// error; close to (but outside) that radius Z is recomputed with a target
/// scaled by |Z| so that the logarithm meets the absolute target.
pub fn log_abs_zeta_half(t: f64, cfg: &PrecisionConfig) -> Result<f64> {
    let z = hardy_z_value(t, cfg)?;
    let threshold = cfg.near_zero_threshold();
    let abs_z = z.value.abs();
    if abs_z < threshold {
        return Err(Error::NearZeroOrdinate { t, abs_z, threshold });
    }
    if z.error_bound <= cfg.target_abs_error * abs_z {
        return Ok(abs_z.ln());
    }
    let target = (cfg.target_abs_error * abs_z).max(1e-15);
    let z = hardy_z_em(t, target, cfg.euler_maclaurin_terms)?;
    let abs_z = z.value.abs();
    if abs_z < threshold {
        return Err(Error::NearZeroOrdinate { t, abs_z, threshold });
    }
    Ok(abs_z.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_near_first_zero_changes_sign() {
        let cfg = PrecisionConfig::default();
        let a = hardy_z(14.13, &cfg).unwrap();
        let b = hardy_z(14.14, &cfg).unwrap();
        assert!(a * b < 0.0);
    }

    #[test]
    fn near_zero_ordinate_rejected() {
        let cfg = PrecisionConfig::default();
        let g = 14.134_725_141_734_693;
        for t in [g - 1e-9, g + 1e-9] {
            assert!(matches!(
                log_abs_zeta_half(t, &cfg),
                Err(Error::NearZeroOrdinate { .. })
            ));
        }
    }

    #[test]
    fn rs_and_em_agree() {
        for t in [35.0, 100.0, 1000.5, 5000.25] {
            let rs = riemann_siegel_z(t, 4).unwrap();
            let em = hardy_z_em(t, 1e-12, 60).unwrap();
            assert!(
                (rs.value - em.value).abs() <= rs.error_bound + em.error_bound,
                "t = {t}: {} vs {} (bound {})",
                rs.value,
                em.value,
                rs.error_bound
            );
        }
    }
}
