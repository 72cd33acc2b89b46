//! The Riemann-Siegel theta function.

use crate::dd::{DoubleDouble, LN_TWO_PI, PI as PI_DD};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Smallest |t| accepted by the asymptotic expansion.
pub const THETA_T_MIN: f64 = 10.0;

/// (1 - 2^{1-2k}) |B_{2k}| / (4k (2k-1)), k = 1..12.
const THETA_COEFFS: [f64; 12] = {
    const B: [(f64, f64); 12] = [
        (1.0, 6.0),
        (1.0, 30.0),
        (1.0, 42.0),
        (1.0, 30.0),
        (5.0, 66.0),
        (691.0, 2730.0),
        (7.0, 6.0),
        (3617.0, 510.0),
        (43867.0, 798.0),
        (174611.0, 330.0),
        (854513.0, 138.0),
        (236364091.0, 2730.0),
    ];
    let mut out = [0.0; 12];
    let mut k = 1;
    while k <= 12 {
        let (num, den) = B[k - 1];
        let mut pow = 1.0;
        let mut j = 1;
        while j < 2 * k {
            pow *= 0.5;
            j += 1;
        }
        // pow = 2^{1-2k}
        out[k - 1] = (1.0 - pow) * num / den / (4.0 * k as f64 * (2 * k - 1) as f64);
        k += 1;
    }
    out
};

/// Number of correction terms used by the asymptotic expansion.
const THETA_TERMS: usize = 11;

/// Main part (t/2) ln(t/2π) - t/2 - π/8 of theta in double-double.
fn theta_main_dd(t: f64) -> DoubleDouble {
    let lt = DoubleDouble::from_f64(t).ln() - LN_TWO_PI;
    let half = DoubleDouble::from_f64(0.5 * t);
    half * lt - half - PI_DD.mul_f64(0.125)
}

fn theta_series(t: f64) -> (f64, f64) {
    let inv = 1.0 / t;
    let inv2 = inv * inv;
    let mut p = inv;
    let mut s = 0.0;
    for c in THETA_COEFFS.iter().take(THETA_TERMS) {
        s += c * p;
        p *= inv2;
    }
    // first omitted term, doubled
    let bound = 2.0 * THETA_COEFFS[THETA_TERMS] * p;
    (s, bound)
}

/// θ(t) for |t| >= THETA_T_MIN in double-double (the correction series is
/// added in f64), together with an error bound.
pub fn theta_asymptotic_dd(t: f64) -> Result<(DoubleDouble, f64)> {
    if !t.is_finite() || t.abs() < THETA_T_MIN {
        return Err(Error::DomainTooSmall { t, t_min: THETA_T_MIN });
    }
    let a = t.abs();
    let (corr, bound) = theta_series(a);
    let v = theta_main_dd(a) + DoubleDouble::from_f64(corr);
    let v = if t < 0.0 { -v } else { v };
    Ok((v, bound + 1e-30 * a))
}

/// θ(t) from the asymptotic expansion; `DomainTooSmall` for |t| < 10.
pub fn rs_theta(t: f64) -> Result<f64> {
    theta_asymptotic_dd(t).map(|(v, _)| v.to_f64())
}

/// ln Γ(z) for Re z > 0, continuous in z (principal branch on the real axis).
pub fn ln_gamma(z: Complex64) -> Complex64 {
    debug_assert!(z.re > 0.0);
    const SHIFT: usize = 20;
    // Bernoulli B_{2k} / (2k (2k-1)), k = 1..10
    const STIRLING: [f64; 10] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
        -3617.0 / 122400.0,
        43867.0 / 244188.0,
        -174611.0 / 125400.0,
    ];
    let w = z + SHIFT as f64;
    let mut shift_sum = Complex64::new(0.0, 0.0);
    for j in 0..SHIFT {
        shift_sum += (z + j as f64).ln();
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut p = inv;
    let mut series = Complex64::new(0.0, 0.0);
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - shift_sum
}

/// θ(t) = arg Γ(1/4 + it/2) - (t/2) ln π for every real t; the asymptotic
/// expansion is used for |t| >= 10 and the log-gamma function below.
pub fn theta(t: f64) -> f64 {
    if t.abs() >= THETA_T_MIN {
        return rs_theta(t).expect("domain checked");
    }
    ln_gamma(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * PI.ln()
}

/// θ(t) reduced modulo 2π, accurate at large t.
pub fn theta_mod_two_pi(t: f64) -> f64 {
    if t.abs() >= THETA_T_MIN {
        theta_asymptotic_dd(t).expect("domain checked").0.rem_two_pi()
    } else {
        theta(t)
    }
}

/// Error bound attached to [`theta`].
pub fn theta_error_bound(t: f64) -> f64 {
    if t.abs() >= THETA_T_MIN {
        theta_asymptotic_dd(t).expect("domain checked").1 + 4.0 * f64::EPSILON * t.abs().max(1.0)
    } else {
        1e-14
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_table_head() {
        assert!((THETA_COEFFS[0] - 1.0 / 48.0).abs() < 1e-18);
        assert!((THETA_COEFFS[1] - 7.0 / 5760.0).abs() < 1e-18);
        assert!((THETA_COEFFS[2] - 31.0 / 80640.0).abs() < 1e-18);
        assert!((THETA_COEFFS[3] - 127.0 / 430080.0).abs() < 1e-18);
    }

    #[test]
    fn asymptotic_and_log_gamma_agree_at_switch() {
        for t in [10.0, 12.5, 20.0, 40.0] {
            let a = rs_theta(t).unwrap();
            let g = ln_gamma(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * PI.ln();
            assert!((a - g).abs() < 1e-13, "t = {t}: {a} vs {g}");
        }
    }

    #[test]
    fn below_threshold_rejected() {
        assert!(matches!(rs_theta(9.99), Err(Error::DomainTooSmall { .. })));
    }

    #[test]
    fn ln_gamma_real_values() {
        // Γ(1/2) = √π, Γ(5) = 24
        let v = ln_gamma(Complex64::new(0.5, 0.0));
        assert!((v.re - 0.5 * PI.ln()).abs() < 1e-14);
        let v = ln_gamma(Complex64::new(5.0, 0.0));
        assert!((v.re - 24f64.ln()).abs() < 1e-13);
    }
}
