//! S(t) = arg ζ(1/2+it)/π, S₁(t) = ∫_0^t S(u) du, and scans of windowed
//! integrals of log|ζ(1/2+it)|.

use crate::error::{Error, Result};
use crate::integral::cumulative_log_z_integral;
use crate::precision::PrecisionConfig;
use crate::quad::{integrate_with_breaks, UnitWeight};
use crate::scan::{ScanReport, ScanSample};
use crate::zeros::ZeroList;
use crate::zeta::{hardy_z, log_zeta_branch, theta, zeta_em, ComplexPoint};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Distance below which t is treated as sitting on a listed ordinate.
pub const ORDINATE_TOLERANCE: f64 = 1e-9;
/// Offset used for the one-sided limits at an ordinate.
const ONE_SIDED_OFFSET: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArgSample {
    pub t: f64,
    pub s: f64,
    pub s1_direct: Option<f64>,
    pub s1_littlewood: Option<f64>,
}

fn s_off_ordinate(t: f64, cfg: &PrecisionConfig) -> Result<f64> {
    Ok(log_zeta_branch(0.5, t, cfg)?.im / PI)
}

fn s_midpoint(t: f64, cfg: &PrecisionConfig) -> Result<f64> {
    let mut d = ONE_SIDED_OFFSET;
    loop {
        match (s_off_ordinate(t - d, cfg), s_off_ordinate(t + d, cfg)) {
            (Ok(a), Ok(b)) => return Ok(0.5 * (a + b)),
            (Err(Error::ZeroOnPath { .. }), _) | (_, Err(Error::ZeroOnPath { .. })) if d < 1e-3 => d *= 10.0,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
}

/// S(t), with the average of the one-sided limits when t is (numerically)
/// an ordinate, i.e. when |Z(t)| is below the zero-proximity threshold.
pub fn s_of_t(t: f64, cfg: &PrecisionConfig) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("t = {t} must be non-negative")));
    }
    if t > 1.0 && hardy_z(t, cfg)?.abs() < cfg.near_zero_threshold() {
        return s_midpoint(t, cfg);
    }
    match s_off_ordinate(t, cfg) {
        Err(Error::ZeroOnPath { sigma, .. }) if sigma <= 0.5 => s_midpoint(t, cfg),
        r => r,
    }
}

/// S(t) using `zeros` to detect ordinates within 1e-9.
pub fn s_of_t_with_zeros(t: f64, zeros: &ZeroList, cfg: &PrecisionConfig) -> Result<f64> {
    match zeros.ordinate_near(t, ORDINATE_TOLERANCE) {
        Some(i) => s_midpoint(zeros.ordinates()[i], cfg),
        None => s_of_t(t, cfg),
    }
}

/// Break points in [1/2, 2] graded toward σ = 1/2.
fn sigma_breaks() -> Vec<f64> {
    let mut b: Vec<f64> = (0..40).map(|k| 0.5 + 1.5 * 0.5f64.powi(k)).collect();
    b.push(0.5);
    b.reverse();
    b
}

fn check_off_ordinate(t: f64, cfg: &PrecisionConfig) -> Result<()> {
    if hardy_z(t, cfg)?.abs() < cfg.near_zero_threshold() {
        return Err(Error::OnOrdinate { t });
    }
    Ok(())
}

/// (1/π) ∫_{1/2}^{2} log|ζ(σ+it)| dσ.
pub fn s1_littlewood(t: f64, cfg: &PrecisionConfig) -> Result<f64> {
    if !(t >= 10.0) {
        return Err(Error::InvalidInput(format!("t = {t} below 10")));
    }
    check_off_ordinate(t, cfg)?;
    let mut err = None;
    let q = integrate_with_breaks(
        |s: f64| match zeta_em(ComplexPoint::new(s, t), cfg) {
            Ok(z) => z.value.norm().ln(),
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        },
        &sigma_breaks(),
        PI * cfg.quad_tol,
        cfg.max_subdivisions,
    );
    if let Some(e) = err {
        return Err(e);
    }
    if !q.converged {
        return Err(Error::ToleranceNotMet {
            estimate: q.abs_error / PI,
            tolerance: cfg.quad_tol,
        });
    }
    Ok(q.value / PI)
}

/// ∫_{1/2}^{2} |log ζ(σ+it)| dσ with log ζ on the standard branch.
pub fn abs_log_zeta_integral(t: f64, cfg: &PrecisionConfig) -> Result<f64> {
    if !(t >= 3.0) {
        return Err(Error::InvalidInput(format!("t = {t} below 3")));
    }
    check_off_ordinate(t, cfg)?;
    let mut err = None;
    let q = integrate_with_breaks(
        |s: f64| match log_zeta_branch(s, t, cfg) {
            Ok(l) => l.norm(),
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        },
        &sigma_breaks(),
        cfg.quad_tol.max(1e-8),
        cfg.max_subdivisions,
    );
    match err {
        Some(e) => Err(e),
        None => Ok(q.value),
    }
}

/// ∫_0^t θ(u) du, to `quad_tol` per unit length.
pub fn theta_integral(t: f64, cfg: &PrecisionConfig) -> Result<f64> {
    let mut breaks: Vec<f64> = (0..).map(|k| 10.0 * k as f64).take_while(|&x| x < t).collect();
    breaks.push(t);
    let tol = unit_tolerance(t, cfg);
    let q = integrate_with_breaks(theta, &breaks, tol, cfg.max_subdivisions);
    if !q.converged {
        return Err(Error::ToleranceNotMet {
            estimate: q.abs_error,
            tolerance: tol,
        });
    }
    Ok(q.value)
}

/// ∫_0^t S(u) du. Between ordinates S(u) = N(u) - 1 - θ(u)/π, so the
/// integral is Σ_{γ <= t} (t - γ) - t - (1/π) ∫_0^t θ.
pub fn s1_direct(t: f64, zeros: &ZeroList, cfg: &PrecisionConfig) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("t = {t} must be non-negative")));
    }
    zeros.require_height(t)?;
    let jumps = crate::dd::compensated_sum(zeros.in_range(0.0, t).iter().map(|&g| t - g));
    Ok(jumps - t - theta_integral(t, cfg)? / PI)
}

pub fn arg_sample(t: f64, zeros: Option<&ZeroList>, cfg: &PrecisionConfig) -> Result<ArgSample> {
    let s = match zeros {
        Some(z) => s_of_t_with_zeros(t, z, cfg)?,
        None => s_of_t(t, cfg)?,
    };
    Ok(ArgSample {
        t,
        s,
        s1_direct: zeros.map(|z| s1_direct(t, z, cfg)).transpose()?,
        s1_littlewood: if t >= 10.0 { Some(s1_littlewood(t, cfg)?) } else { None },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LittlewoodDrift {
    /// (t, S1_direct - S1_littlewood)
    pub differences: Vec<(f64, f64)>,
    /// Least-squares slope times the length of the t range.
    pub trend: f64,
    /// max - min of the differences.
    pub spread: f64,
}

/// S1_direct - S1_littlewood on a grid.
pub fn littlewood_drift(ts: &[f64], zeros: &ZeroList, cfg: &PrecisionConfig) -> Result<LittlewoodDrift> {
    if ts.len() < 2 {
        return Err(Error::InvalidInput("need at least two grid points".into()));
    }
    let differences: Vec<(f64, f64)> = ts
        .par_iter()
        .map(|&t| Ok((t, s1_direct(t, zeros, cfg)? - s1_littlewood(t, cfg)?)))
        .collect::<Result<_>>()?;
    let n = differences.len() as f64;
    let mt = differences.iter().map(|p| p.0).sum::<f64>() / n;
    let md = differences.iter().map(|p| p.1).sum::<f64>() / n;
    let stt: f64 = differences.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let std: f64 = differences.iter().map(|p| (p.0 - mt) * (p.1 - md)).sum();
    let (lo, hi) = differences
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.1), hi.max(p.1))
        });
    let range = differences.last().unwrap().0 - differences[0].0;
    Ok(LittlewoodDrift {
        trend: if stt > 0.0 { std / stt * range } else { 0.0 },
        spread: hi - lo,
        differences,
    })
}

/// Absolute tolerance for unit-weight integrals over a range of length
/// `len`: `quad_tol` per unit length.
fn unit_tolerance(len: f64, cfg: &PrecisionConfig) -> f64 {
    cfg.quad_tol * len.max(1.0)
}

/// ∫_T^t log|ζ(1/2+iu)| du on an ascending grid, normalized by
/// (log log t)² / log t.
pub fn lemma2_scan(t0: f64, grid: &[f64], zeros: &ZeroList, cfg: &PrecisionConfig) -> Result<ScanReport> {
    if !(t0 >= 3.0) {
        return Err(Error::InvalidInput(format!("T = {t0} below 3")));
    }
    if grid.is_empty() || grid[0] < t0 || grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidInput("grid must be ascending with minimum >= T".into()));
    }
    let mut breaks = vec![t0];
    breaks.extend_from_slice(grid);
    let tol = unit_tolerance(grid.last().unwrap() - t0, cfg);
    let c = cumulative_log_z_integral(&breaks, zeros, &UnitWeight, tol, cfg)?;
    let samples = grid
        .iter()
        .zip(&c.values[1..])
        .map(|(&t, &v)| {
            let l = t.ln();
            ScanSample {
                t,
                stat: v,
                normalized: v * l.ln().powi(2) / l,
                flagged: false,
            }
        })
        .collect();
    Ok(ScanReport::from_samples(samples))
}

/// sup |normalized| over the last octave of the grid and over the part
/// before it.
pub fn last_octave_sups(report: &ScanReport) -> Option<(f64, f64)> {
    let end = report.samples.last()?.t;
    let (mut late, mut early) = (0.0f64, 0.0f64);
    for s in &report.samples {
        if s.t >= 0.5 * end {
            late = late.max(s.normalized.abs());
        } else {
            early = early.max(s.normalized.abs());
        }
    }
    Some((late, early))
}

/// ∫_{t-h}^{t+h} log|ζ(1/2+iu)| du for t in [T, 2T] on a grid of spacing
/// h/4, normalized by h sqrt(log t / log log t).
pub fn omega_scan(t0: f64, h: f64, zeros: &ZeroList, cfg: &PrecisionConfig) -> Result<ScanReport> {
    if !(h > 0.0 && h <= 1.0) {
        return Err(Error::InvalidInput(format!("h = {h} outside (0, 1]")));
    }
    if !(t0 >= 10.0) {
        return Err(Error::InvalidInput(format!("T = {t0} below 10")));
    }
    let step = 0.25 * h;
    let centers = (t0 / step).round() as usize + 1;
    // break k sits at t0 - h + k*step; window j spans breaks j..j+8
    let breaks: Vec<f64> = (0..centers + 8).map(|k| t0 - h + k as f64 * step).collect();
    let tol = unit_tolerance(t0 + 2.0 * h, cfg);
    let c = cumulative_log_z_integral(&breaks, zeros, &UnitWeight, tol, cfg)?;
    let samples = (0..centers)
        .map(|j| {
            let t = t0 + j as f64 * step;
            let v = c.values[j + 8] - c.values[j];
            let l = t.ln();
            ScanSample {
                t,
                stat: v,
                normalized: v / (h * (l / l.ln()).sqrt()),
                flagged: false,
            }
        })
        .collect();
    Ok(ScanReport::from_samples(samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeros::find_zeros_up_to;

    const GAMMA1: f64 = 14.134_725_141_734_693;

    #[test]
    fn s_matches_counting_identity_at_50() {
        let cfg = PrecisionConfig::default();
        // ten ordinates below 50
        let s = s_of_t(50.0, &cfg).unwrap();
        let expected = 10.0 - 1.0 - theta(50.0) / PI;
        assert!((s - expected).abs() < 1e-8, "{s} vs {expected}");
    }

    #[test]
    fn s_jumps_by_one_and_takes_midpoint() {
        let cfg = PrecisionConfig::default();
        let left = s_of_t(GAMMA1 - 1e-4, &cfg).unwrap();
        let right = s_of_t(GAMMA1 + 1e-4, &cfg).unwrap();
        assert!((right - left - 1.0).abs() < 1e-3);
        let mid = s_of_t(GAMMA1, &cfg).unwrap();
        assert!((mid - 0.5 * (left + right)).abs() < 1e-3);
    }

    #[test]
    fn s1_direct_matches_piecewise_integral_of_s() {
        let cfg = PrecisionConfig::default();
        let zeros = find_zeros_up_to(30.0, &cfg).unwrap();
        let mut breaks = vec![0.0];
        breaks.extend_from_slice(zeros.in_range(0.0, 26.0));
        breaks.push(26.0);
        let q = integrate_with_breaks(|u: f64| s_of_t(u, &cfg).unwrap(), &breaks, 1e-9, 10_000);
        let direct = s1_direct(26.0, &zeros, &cfg).unwrap();
        assert!((q.value - direct).abs() < 1e-8, "{} vs {direct}", q.value);
    }

    #[test]
    fn s1_is_continuous_at_first_ordinate() {
        let cfg = PrecisionConfig::default();
        let zeros = find_zeros_up_to(20.0, &cfg).unwrap();
        let a = s1_direct(GAMMA1 - 1e-12, &zeros, &cfg).unwrap();
        let b = s1_direct(GAMMA1 + 1e-12, &zeros, &cfg).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn littlewood_integrand_bounded_at_two() {
        let cfg = PrecisionConfig::default();
        let z = zeta_em(ComplexPoint::new(2.0, 77.0), &cfg).unwrap();
        assert!(z.value.norm().ln() <= (PI * PI / 6.0f64).ln());
    }

    #[test]
    fn lemma2_scan_starts_at_zero_and_telescopes() {
        let cfg = PrecisionConfig::default();
        let zeros = find_zeros_up_to(120.0, &cfg).unwrap();
        let r = lemma2_scan(10.0, &[10.0, 50.0, 100.0], &zeros, &cfg).unwrap();
        assert_eq!(r.samples[0].stat, 0.0);
        let direct = lemma2_scan(50.0, &[100.0], &zeros, &cfg).unwrap();
        let d = r.samples[2].stat - r.samples[1].stat;
        assert!((d - direct.samples[0].stat).abs() < 1e-7);
    }

    #[test]
    fn small_window_approaches_pointwise_value() {
        let cfg = PrecisionConfig::default();
        let zeros = find_zeros_up_to(70.0, &cfg).unwrap();
        let h = 1e-3;
        let r = omega_scan(30.0, h, &zeros, &cfg).unwrap();
        let v = r.samples[0].stat;
        let pointwise = 2.0 * h * crate::zeta::log_abs_zeta_half(30.0, &cfg).unwrap();
        assert!((v / pointwise - 1.0).abs() < 0.1);
    }
}
