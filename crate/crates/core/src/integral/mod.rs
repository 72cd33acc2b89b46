//! The weighted critical-line integral
//!
//!   I(T) = ∫_{-T}^{T} log|ζ(1/2+it)| / (1/4+t²) dt,
//!
//! its tails, the zero-sum of hypothetical off-line zeros, the decay fit and
//! the weight identity ∫ log|-1/2+it| / (1/4+t²) dt = 0.

mod fit;
mod panels;

pub use fit::fit_decay;
pub use panels::{cumulative_log_z_integral, CumulativeIntegral, PanelStats, GUARD_RADIUS};

use crate::error::{Error, Result};
use crate::precision::PrecisionConfig;
use crate::quad::{integrate_with_breaks, BsyWeight};
use crate::scan::{DecayModel, ScanReport, ScanSample};
use crate::zeros::{mean_spacing, ZeroCandidate, ZeroList};
use crate::zeta::log_abs_zeta_half;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: f64,
    pub abs_error_est: f64,
    pub subintervals: usize,
    pub singularities_handled: usize,
}

/// log|ζ(1/2+it)| / (1/4+t²).
pub fn bsy_integrand(t: f64, cfg: &PrecisionConfig) -> Result<f64> {
    Ok(log_abs_zeta_half(t, cfg)? / (0.25 + t * t))
}

fn check_tolerance(r: &IntegralResult, tol: f64) -> Result<()> {
    if !(r.abs_error_est <= tol) {
        return Err(Error::ToleranceNotMet {
            estimate: r.abs_error_est,
            tolerance: tol,
        });
    }
    Ok(())
}

/// 2 ∫_a^b log|Z(t)| / (1/4+t²) dt for 0 <= a <= b.
fn twice_weighted(a: f64, b: f64, zeros: &ZeroList, cfg: &PrecisionConfig) -> Result<IntegralResult> {
    let c = cumulative_log_z_integral(&[a, b], zeros, &BsyWeight, 0.5 * cfg.quad_tol, cfg)?;
    let r = IntegralResult {
        value: 2.0 * c.values[1],
        abs_error_est: 2.0 * c.stats.abs_error_est,
        subintervals: c.stats.subintervals,
        singularities_handled: c.stats.singularities,
    };
    check_tolerance(&r, cfg.quad_tol)?;
    if r.subintervals > cfg.max_subdivisions {
        return Err(Error::ToleranceNotMet {
            estimate: r.abs_error_est,
            tolerance: cfg.quad_tol,
        });
    }
    Ok(r)
}

/// I(T), using evenness: 2 ∫_0^T.
pub fn compute_i(t: f64, zeros: &ZeroList, cfg: &PrecisionConfig) -> Result<IntegralResult> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("T = {t} must be non-negative")));
    }
    twice_weighted(0.0, t, zeros, cfg)
}

/// -2 ∫_T^{T_max} log|ζ(1/2+it)| / (1/4+t²) dt.
pub fn tail_i(t: f64, t_max: f64, zeros: &ZeroList, cfg: &PrecisionConfig) -> Result<IntegralResult> {
    if !(t >= 0.0 && t <= t_max) {
        return Err(Error::InvalidInput(format!("need 0 <= T <= T_max, got {t}, {t_max}")));
    }
    let r = twice_weighted(t, t_max, zeros, cfg)?;
    Ok(IntegralResult { value: -r.value, ..r })
}

/// I(T) at every point of an ascending ladder, integrating each rung once.
pub fn compute_i_ladder(ts: &[f64], zeros: &ZeroList, cfg: &PrecisionConfig) -> Result<Vec<IntegralResult>> {
    if ts.is_empty() {
        return Ok(Vec::new());
    }
    if ts[0] < 0.0 || ts.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidInput("ladder must be ascending and non-negative".into()));
    }
    let mut breaks = vec![0.0];
    breaks.extend_from_slice(ts);
    let c = cumulative_log_z_integral(&breaks, zeros, &BsyWeight, 0.5 * cfg.quad_tol, cfg)?;
    let mut out = Vec::with_capacity(ts.len());
    let mut err = 0.0;
    let ords = zeros.ordinates();
    for (k, &t) in ts.iter().enumerate() {
        err += c.increment_errors[k];
        let r = IntegralResult {
            value: 2.0 * c.values[k + 1],
            abs_error_est: 2.0 * err,
            subintervals: c.stats.subintervals,
            singularities_handled: ords.partition_point(|&g| g <= t),
        };
        check_tolerance(&r, cfg.quad_tol)?;
        out.push(r);
    }
    Ok(out)
}

/// log|ρ/(1-ρ)| = (1/2) log((β²+γ²)/((1-β)²+γ²)) for a hypothetical zero ρ.
pub fn zero_sum_term(rho: &ZeroCandidate) -> f64 {
    let b = rho.beta();
    let g = rho.gamma();
    0.5 * ((2.0 * b - 1.0) / ((1.0 - b) * (1.0 - b) + g * g)).ln_1p()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Residual {
    pub t: f64,
    pub integral: f64,
    pub residual: f64,
    /// residual · T² / log T
    pub normalized: f64,
}

/// I(T) - 2π Σ_{|γ| <= T} log|ρ/(1-ρ)| over the hypothetical zeros, given I(T).
pub fn theorem2_residual_from(t: f64, integral: f64, hypotheticals: &[ZeroCandidate]) -> Result<Theorem2Residual> {
    if !(t >= 3.0) {
        return Err(Error::InvalidInput(format!("T = {t} below 3")));
    }
    let shift: f64 = hypotheticals
        .iter()
        .filter(|r| r.gamma().abs() <= t)
        .map(zero_sum_term)
        .sum();
    let residual = integral - 2.0 * PI * shift;
    Ok(Theorem2Residual {
        t,
        integral,
        residual,
        normalized: residual * t * t / t.ln(),
    })
}

pub fn theorem2_residual(
    t: f64,
    hypotheticals: &[ZeroCandidate],
    zeros: &ZeroList,
    cfg: &PrecisionConfig,
) -> Result<Theorem2Residual> {
    if !(t >= 3.0) {
        return Err(Error::InvalidInput(format!("T = {t} below 3")));
    }
    let i = compute_i(t, zeros, cfg)?;
    theorem2_residual_from(t, i.value, hypotheticals)
}

/// Offsets, in mean zero spacings, at which the sign of I is probed around a
/// ladder point.
const SIGN_PROBES: [f64; 8] = [-1.0, -0.75, -0.5, -0.25, 0.25, 0.5, 0.75, 1.0];

/// I(T) on a ladder together with a flag for samples whose sign is not
/// constant within one mean zero spacing, or whose magnitude is below ten
/// error estimates.
pub fn i_scan(ts: &[f64], zeros: &ZeroList, cfg: &PrecisionConfig) -> Result<Vec<ScanSample>> {
    let mut probes: Vec<f64> = Vec::with_capacity(ts.len() * (SIGN_PROBES.len() + 1));
    for &t in ts {
        let s = mean_spacing(t);
        probes.push(t);
        probes.extend(SIGN_PROBES.iter().map(|k| (t + k * s).max(0.0)));
    }
    let mut sorted = probes.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    sorted.dedup();
    let values = compute_i_ladder(&sorted, zeros, cfg)?;
    let lookup = |x: f64| {
        let i = sorted.partition_point(|&y| y < x);
        values[i]
    };
    Ok(ts
        .iter()
        .map(|&t| {
            let r = lookup(t);
            let s = mean_spacing(t);
            let sign_change = SIGN_PROBES
                .iter()
                .map(|k| lookup((t + k * s).max(0.0)).value)
                .any(|v| (v < 0.0) != (r.value < 0.0));
            let tiny = r.value.abs() < 10.0 * r.abs_error_est;
            ScanSample {
                t,
                stat: r.value,
                normalized: r.value * t * t / t.ln(),
                flagged: sign_change || tiny,
            }
        })
        .collect())
}

/// Decay scan: I(T) on `points` log-spaced heights in [t_min, t_max], fitted
/// with `model`.
pub fn decay_scan(
    t_min: f64,
    t_max: f64,
    points: usize,
    model: DecayModel,
    zeros: &ZeroList,
    cfg: &PrecisionConfig,
) -> Result<ScanReport> {
    if !(t_min > 1.0 && t_max > t_min && points >= 2) {
        return Err(Error::InvalidInput(
            "need 1 < t_min < t_max and at least 2 points".into(),
        ));
    }
    let ratio = (t_max / t_min).powf(1.0 / (points - 1) as f64);
    let ts: Vec<f64> = (0..points)
        .map(|k| {
            if k + 1 == points {
                t_max
            } else {
                t_min * ratio.powi(k as i32)
            }
        })
        .collect();
    let samples = i_scan(&ts, zeros, cfg)?;
    fit_decay(&samples, model)
}

/// The truncated weight identity 2 ∫_0^X (1/2) log(1/4+t²) / (1/4+t²) dt.
/// The full-line integral vanishes; the truncation is about -2(1+log X)/X.
pub fn weight_identity_check(x: f64, cfg: &PrecisionConfig) -> Result<IntegralResult> {
    if !(x >= 10.0) {
        return Err(Error::InvalidInput(format!("X = {x} below 10")));
    }
    let r = weight_integral(0.0, x, cfg)?;
    Ok(IntegralResult {
        value: 2.0 * r.value,
        abs_error_est: 2.0 * r.abs_error_est,
        ..r
    })
}

/// ∫_a^b (1/2) log(1/4+t²) / (1/4+t²) dt with dyadic break points.
pub fn weight_integral(a: f64, b: f64, cfg: &PrecisionConfig) -> Result<IntegralResult> {
    let mut breaks = vec![a];
    let mut p = 0.5;
    while p < b.abs().max(a.abs()) {
        if p > a && p < b {
            breaks.push(p);
        }
        if -p > a && -p < b {
            breaks.push(-p);
        }
        p *= 2.0;
    }
    if a < 0.0 && b > 0.0 {
        breaks.push(0.0);
    }
    breaks.push(b);
    breaks.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let q = integrate_with_breaks(
        |t: f64| {
            let w = 0.25 + t * t;
            0.5 * w.ln() / w
        },
        &breaks,
        cfg.quad_tol,
        cfg.max_subdivisions,
    );
    let r = IntegralResult {
        value: q.value,
        abs_error_est: q.abs_error,
        subintervals: q.subintervals,
        singularities_handled: 0,
    };
    check_tolerance(&r, cfg.quad_tol)?;
    Ok(r)
}

/// The majorant 4(1 + log X)/X for the truncated weight identity.
pub fn weight_identity_majorant(x: f64) -> f64 {
    4.0 * (1.0 + x.ln()) / x
}
