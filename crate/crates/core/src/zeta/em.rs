//! Euler-Maclaurin summation for ζ(s) with Backlund's remainder bound.

use super::{ComplexPoint, ZetaValue, POLE_THRESHOLD};
use crate::dd::{n_pow_neg_s, ComplexSum};
use crate::error::{Error, Result};
use crate::precision::{PrecisionConfig, MAX_EULER_MACLAURIN_TERMS};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

const MAX_N: u64 = 200_000_000;

/// (-1)^{k+1} 2 ζ(2k), k = 1..=MAX_EULER_MACLAURIN_TERMS + 1.
fn bernoulli_factors() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (1..=MAX_EULER_MACLAURIN_TERMS + 1)
            .map(|k| {
                let z = zeta_even(k);
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                2.0 * sign * z
            })
            .collect()
    })
}

/// ζ(2k) for k >= 1.
fn zeta_even(k: usize) -> f64 {
    match k {
        1 => PI * PI / 6.0,
        2 => PI.powi(4) / 90.0,
        3 => PI.powi(6) / 945.0,
        4 => PI.powi(8) / 9450.0,
        _ => {
            let e = 2 * k as i32;
            let mut s = 0.0;
            for n in (1..=40).rev() {
                s += (n as f64).powi(-e);
            }
            s
        }
    }
}

struct Plan {
    n: u64,
    terms: usize,
    bound: f64,
}

/// Smallest N (on a geometric ladder) for which some number of correction
/// terms brings Backlund's bound below `target`.
fn plan(s: Complex64, target: f64, max_terms: usize) -> Result<Plan> {
    let factors = bernoulli_factors();
    let abs_s = s.norm();
    let mut n = ((abs_s / (2.0 * PI)).ceil() as u64).max(2) + 1;
    loop {
        let nf = n as f64;
        let scale = nf.powf(-s.re);
        let two_pi_n_sq = (2.0 * PI * nf).powi(2);
        // U_1 = s / ((2π)^2 N); U_{k+1} = U_k (s+2k-1)(s+2k) / (2πN)^2
        let mut u_abs = abs_s / (2.0 * PI * 2.0 * PI * nf);
        let mut prev_tail = f64::INFINITY;
        for k in 1..=max_terms {
            let kf = k as f64;
            u_abs *= (s + (2.0 * kf - 1.0)).norm() * (s + 2.0 * kf).norm() / two_pi_n_sq;
            // |T_{k+1}| with U_{k+1} now in u_abs
            let t_next = factors[k].abs() * u_abs * scale;
            let backlund = ((s + (2.0 * kf + 1.0)).norm() / (s.re + 2.0 * kf + 1.0)) * t_next;
            if backlund <= target {
                return Ok(Plan {
                    n,
                    terms: k,
                    bound: backlund,
                });
            }
            if backlund > prev_tail {
                break;
            }
            prev_tail = backlund;
        }
        let next = ((n as f64) * 1.25).ceil() as u64 + 1;
        if next > MAX_N {
            return Err(Error::PrecisionUnreachable {
                target,
                reason: format!("Euler-Maclaurin needs more than {MAX_N} terms at s = {s}"),
            });
        }
        n = next;
    }
}

/// ζ(s) by Euler-Maclaurin summation, with absolute error bound.
pub fn zeta_em(s: ComplexPoint, cfg: &PrecisionConfig) -> Result<ZetaValue> {
    zeta_em_target(s, cfg.target_abs_error, cfg.euler_maclaurin_terms)
}

pub(crate) fn zeta_em_target(s: ComplexPoint, target: f64, max_terms: usize) -> Result<ZetaValue> {
    let ComplexPoint { sigma, t } = s;
    if !(sigma.is_finite() && t.is_finite()) {
        return Err(Error::InvalidInput("s must be finite".into()));
    }
    if sigma < -1.0 {
        return Err(Error::InvalidInput(format!("sigma = {sigma} below -1")));
    }
    let sc = Complex64::new(sigma, t);
    if (sc - 1.0).norm() < POLE_THRESHOLD {
        return Err(Error::PoleAt1 {
            sigma,
            t,
            threshold: POLE_THRESHOLD,
        });
    }
    // half of the budget for truncation, the rest absorbs roundoff
    let max_terms = max_terms.clamp(1, MAX_EULER_MACLAURIN_TERMS);
    let p = plan(sc, 0.5 * target, max_terms)?;
    let mut sum = ComplexSum::new();
    let mut abs_sum = 0.0;
    for n in 1..p.n {
        let z = n_pow_neg_s(n, sigma, t);
        abs_sum += z.re.abs() + z.im.abs();
        sum.add(z);
    }
    let nf = p.n as f64;
    let n_s = n_pow_neg_s(p.n, sigma, t);
    sum.add(n_s * nf / (sc - 1.0));
    sum.add(n_s * 0.5);
    let factors = bernoulli_factors();
    let two_pi_n_sq = (2.0 * PI * nf).powi(2);
    let mut u = sc / (2.0 * PI * 2.0 * PI * nf);
    let mut corr = ComplexSum::new();
    for k in 1..=p.terms {
        corr.add(u * factors[k - 1]);
        let kf = k as f64;
        u = u * (sc + (2.0 * kf - 1.0)) * (sc + 2.0 * kf) / two_pi_n_sq;
    }
    sum.add(corr.value() * n_s);
    let value = sum.value();
    let roundoff = 8.0 * f64::EPSILON * (abs_sum + value.norm() + nf.powf(1.0 - sigma) / (sc - 1.0).norm());
    Ok(ZetaValue {
        value,
        error_bound: p.bound + roundoff,
        terms: p.n,
    })
}

/// Steps between exact recomputations of n^{-s} in [`zeta_em_vertical`].
const RESEED: usize = 64;

/// ζ(σ + i(t0 + jΔ)) for j = 0..count, with one Euler-Maclaurin plan for the
/// whole grid and the main sum advanced by multiplying with n^{-iΔ}.
pub fn zeta_em_vertical(
    sigma: f64,
    t0: f64,
    step: f64,
    count: usize,
    target: f64,
    max_terms: usize,
) -> Result<Vec<Complex64>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    if !(sigma.is_finite() && t0.is_finite() && step.is_finite() && step >= 0.0) {
        return Err(Error::InvalidInput("grid must be finite with step >= 0".into()));
    }
    if sigma < -1.0 {
        return Err(Error::InvalidInput(format!("sigma = {sigma} below -1")));
    }
    let t_end = t0 + step * (count - 1) as f64;
    let t_far = t0.abs().max(t_end.abs());
    // closest grid point to the pole
    let t_near = if t0 <= 0.0 && t_end >= 0.0 {
        0.0
    } else {
        t0.abs().min(t_end.abs())
    };
    if Complex64::new(sigma - 1.0, t_near).norm() < POLE_THRESHOLD {
        return Err(Error::PoleAt1 {
            sigma,
            t: t_near,
            threshold: POLE_THRESHOLD,
        });
    }
    let max_terms = max_terms.clamp(1, MAX_EULER_MACLAURIN_TERMS);
    let p = plan(Complex64::new(sigma, t_far), 0.5 * target, max_terms)?;
    let main_len = (p.n - 1) as usize;
    let rot: Vec<Complex64> = (1..p.n).map(|n| n_pow_neg_s(n, 0.0, step)).collect();
    let mut cur = vec![Complex64::new(0.0, 0.0); main_len];
    let factors = bernoulli_factors();
    let nf = p.n as f64;
    let two_pi_n_sq = (2.0 * PI * nf).powi(2);
    let mut out = Vec::with_capacity(count);
    for j in 0..count {
        let t = t0 + step * j as f64;
        if j % RESEED == 0 {
            for (k, c) in cur.iter_mut().enumerate() {
                *c = n_pow_neg_s(k as u64 + 1, sigma, t);
            }
        } else {
            for (c, r) in cur.iter_mut().zip(&rot) {
                *c *= r;
            }
        }
        let mut main = ComplexSum::new();
        for chunk in cur.chunks(256) {
            main.add(chunk.iter().sum::<Complex64>());
        }
        let sc = Complex64::new(sigma, t);
        let n_s = n_pow_neg_s(p.n, sigma, t);
        let mut u = sc / (2.0 * PI * 2.0 * PI * nf);
        let mut corr = Complex64::new(0.0, 0.0);
        for k in 1..=p.terms {
            corr += u * factors[k - 1];
            let kf = k as f64;
            u = u * (sc + (2.0 * kf - 1.0)) * (sc + 2.0 * kf) / two_pi_n_sq;
        }
        main.add(n_s * nf / (sc - 1.0) + n_s * 0.5 + corr * n_s);
        out.push(main.value());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_zeta_values() {
        assert!((zeta_even(5) - 1.000_994_575_127_818_1).abs() < 1e-15);
        assert!((zeta_even(10) - 1.000_000_953_962_033_9).abs() < 1e-15);
    }

    #[test]
    fn zeta_two() {
        let z = zeta_em(ComplexPoint::new(2.0, 0.0), &PrecisionConfig::default()).unwrap();
        let err = (z.value.re - PI * PI / 6.0).abs();
        assert!(err <= z.error_bound && err <= 1e-10);
        assert!(z.value.im.abs() < 1e-15);
    }

    #[test]
    fn pole_detected() {
        let r = zeta_em(ComplexPoint::new(1.0005, 0.0), &PrecisionConfig::default());
        assert!(matches!(r, Err(Error::PoleAt1 { .. })));
    }

    #[test]
    fn negative_real_axis() {
        // ζ(-1) = -1/12
        let z = zeta_em(ComplexPoint::new(-1.0, 0.0), &PrecisionConfig::default()).unwrap();
        assert!((z.value.re + 1.0 / 12.0).abs() < 1e-10);
    }

    #[test]
    fn vertical_grid_matches_pointwise() {
        let v = zeta_em_vertical(0.6, 1000.0, 0.01, 200, 1e-10, 60).unwrap();
        for j in [0, 1, 63, 64, 65, 199] {
            let z = zeta_em_target(ComplexPoint::new(0.6, 1000.0 + 0.01 * j as f64), 1e-10, 60).unwrap();
            assert!((v[j] - z.value).norm() < 1e-9, "{j}: {} vs {}", v[j], z.value);
        }
    }
}
