//! log ζ(σ + it) continued from ζ(2) = π²/6 along 2 → 2+it → σ+it.

use super::em::zeta_em_target;
use super::{ComplexPoint, POLE_THRESHOLD};
use crate::error::{Error, Result};
use crate::precision::PrecisionConfig;
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_4;

const INITIAL_STEP: f64 = 0.125;
const MAX_STEP: f64 = 0.25;
const MIN_STEP: f64 = 1e-12;

/// log ζ(σ + it) on the standard branch (arg ζ(2) = 0).
///
/// For σ >= 2 the principal logarithm is the branch since Re ζ > 0 there.
/// Otherwise the horizontal segment from 2 + it is walked with step halving
/// until each increment of log ζ has modulus below π/4.
pub fn log_zeta_branch(sigma: f64, t: f64, cfg: &PrecisionConfig) -> Result<Complex64> {
    if !(sigma.is_finite() && t.is_finite()) {
        return Err(Error::InvalidInput("s must be finite".into()));
    }
    if t < 0.0 {
        return Err(Error::InvalidInput(format!("t = {t} must be non-negative")));
    }
    if sigma < 0.5 {
        return Err(Error::InvalidInput(format!("sigma = {sigma} below 1/2")));
    }
    let target = cfg.target_abs_error;
    let max_terms = cfg.euler_maclaurin_terms;
    let eval = |s: f64| zeta_em_target(ComplexPoint::new(s, t), target, max_terms).map(|z| z.value);

    if sigma >= 2.0 {
        return Ok(eval(sigma)?.ln());
    }
    if t < POLE_THRESHOLD && sigma <= 1.0 + POLE_THRESHOLD {
        return Err(Error::PoleAt1 {
            sigma,
            t,
            threshold: POLE_THRESHOLD,
        });
    }
    let threshold = cfg.near_zero_threshold();
    let mut pos = 2.0;
    let mut z_prev = eval(2.0)?;
    let mut log = z_prev.ln();
    let mut step = INITIAL_STEP;
    while pos > sigma {
        let next = (pos - step).max(sigma);
        let z = eval(next)?;
        let abs = z.norm();
        if abs < threshold {
            return Err(Error::ZeroOnPath {
                sigma: next,
                t,
                abs_zeta: abs,
            });
        }
        let delta = (z / z_prev).ln();
        if delta.norm() >= FRAC_PI_4 {
            step *= 0.5;
            if step < MIN_STEP {
                return Err(Error::BranchAmbiguous { sigma: next, t });
            }
            continue;
        }
        log += delta;
        z_prev = z;
        pos = next;
        step = (step * 1.5).min(MAX_STEP);
    }
    // re-anchor the real part on the freshly computed modulus
    Ok(Complex64::new(z_prev.norm().ln(), log.im))
}
