//! ∫ log|Z(t)| w(t) dt across zero ordinates.
//!
//! The range is cut at every ordinate. On a panel, the zeros at its ends and
//! the nearest zero on either side form the singular set J, and
//!
//!   log|Z(t)| = Σ_{γ∈J} log|t-γ| + R(t)
//!
//! with R analytic on the panel. The logarithms are integrated by the graded
//! mesh rule with explicit bounds, R by adaptive Gauss-Kronrod.

use crate::dd::CompensatedSum;
use crate::error::{Error, Result};
use crate::precision::PrecisionConfig;
use crate::quad::{integrate, log_singular_integral, Weight};
use crate::zeros::{mean_spacing, ZeroList};
use crate::zeta::hardy_z;
use rayon::prelude::*;

/// Below this distance to an ordinate R is evaluated from a local Taylor
/// model of Z instead of the quotient.
pub const GUARD_RADIUS: f64 = 1e-6;
/// Step of the 5-point stencil for Z' and Z''.
const STENCIL_H: f64 = 1e-3;
/// Panels longer than this many mean spacings are split.
const MAX_PANEL_SPACINGS: f64 = 1.0;
const MAX_PANEL_SUBDIVISIONS: usize = 2000;
/// Roundoff floor of the Z evaluators.
const MIN_EVAL_TARGET: f64 = 1e-13;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PanelStats {
    pub abs_error_est: f64,
    pub subintervals: usize,
    pub singularities: usize,
}

/// Integrals from `breaks[0]` to each break point.
#[derive(Debug, Clone)]
pub struct CumulativeIntegral {
    pub breaks: Vec<f64>,
    pub values: Vec<f64>,
    /// Error estimate of each increment values[i+1] - values[i].
    pub increment_errors: Vec<f64>,
    pub stats: PanelStats,
}

#[derive(Debug, Clone, Copy)]
struct LocalZero {
    gamma: f64,
    /// Z'(γ) and Z''(γ)/2
    d1: f64,
    d2_half: f64,
}

fn local_zero(gamma: f64, cfg: &PrecisionConfig) -> Result<LocalZero> {
    let h = STENCIL_H;
    let f = |x: f64| hardy_z(x, cfg);
    let (m2, m1, z0, p1, p2) = (
        f(gamma - 2.0 * h)?,
        f(gamma - h)?,
        f(gamma)?,
        f(gamma + h)?,
        f(gamma + 2.0 * h)?,
    );
    let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let d2 = (-m2 + 16.0 * m1 - 30.0 * z0 + 16.0 * p1 - p2) / (12.0 * h * h);
    Ok(LocalZero {
        gamma,
        d1,
        d2_half: 0.5 * d2,
    })
}

/// log|Z(t)| - Σ_J log|t-γ|.
fn remainder(t: f64, set: &[LocalZero], cfg: &PrecisionConfig) -> Result<f64> {
    let close = set.iter().enumerate().find(|(_, z)| (t - z.gamma).abs() < GUARD_RADIUS);
    match close {
        Some((i, z)) => {
            let u = t - z.gamma;
            let mut r = (z.d1 + z.d2_half * u).abs().ln();
            for (j, other) in set.iter().enumerate() {
                if j != i {
                    r -= (t - other.gamma).abs().ln();
                }
            }
            Ok(r)
        }
        None => {
            let z = hardy_z(t, cfg)?;
            let mut r = z.abs().ln();
            for other in set {
                r -= (t - other.gamma).abs().ln();
            }
            Ok(r)
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    /// indices into the zero list of the singular set
    set: Vec<usize>,
}

fn build_panels(breaks: &[f64], zeros: &[f64]) -> Vec<Panel> {
    let a0 = breaks[0];
    let b0 = *breaks.last().unwrap();
    let mut cuts: Vec<f64> = breaks.to_vec();
    let lo = zeros.partition_point(|&g| g <= a0);
    let hi = zeros.partition_point(|&g| g < b0);
    cuts.extend_from_slice(&zeros[lo..hi]);
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    // split long panels
    let mut fine = Vec::with_capacity(cuts.len());
    for w in cuts.windows(2) {
        let len = w[1] - w[0];
        let cap = MAX_PANEL_SPACINGS * mean_spacing(w[1]);
        let pieces = (len / cap).ceil().max(1.0) as usize;
        for k in 0..pieces {
            fine.push(w[0] + len * k as f64 / pieces as f64);
        }
    }
    fine.push(*cuts.last().unwrap());
    fine.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            // zeros inside [a, b] (at the ends) plus one neighbour either side
            let first = zeros.partition_point(|&g| g < a);
            let last = zeros.partition_point(|&g| g <= b);
            let from = first.saturating_sub(1);
            let to = (last + 1).min(zeros.len());
            Panel {
                a,
                b,
                set: (from..to).collect(),
            }
        })
        .collect()
}

/// ∫ log|Z(t)| w(t) dt from `breaks[0]` to every later break point.
///
/// `tol` is the absolute tolerance for the integral over the whole range; it
/// is distributed over panels in proportion to their weight mass.
pub fn cumulative_log_z_integral<W: Weight + ?Sized>(
    breaks: &[f64],
    zeros: &ZeroList,
    weight: &W,
    tol: f64,
    cfg: &PrecisionConfig,
) -> Result<CumulativeIntegral> {
    if breaks.len() < 2 {
        return Ok(CumulativeIntegral {
            breaks: breaks.to_vec(),
            values: vec![0.0; breaks.len()],
            increment_errors: vec![0.0; breaks.len().saturating_sub(1)],
            stats: PanelStats::default(),
        });
    }
    if breaks.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidInput("break points must be ascending".into()));
    }
    let b_end = *breaks.last().unwrap();
    zeros.require_height(b_end)?;
    if breaks[0] < 0.0 {
        return Err(Error::InvalidInput("integration range must lie in t >= 0".into()));
    }
    let ords = zeros.ordinates();
    let panels = build_panels(breaks, ords);
    let masses: Vec<f64> = panels
        .iter()
        .map(|p| weight.eval(0.5 * (p.a + p.b)).abs() * (p.b - p.a))
        .collect();
    let total_mass: f64 = masses.iter().sum::<f64>().max(f64::MIN_POSITIVE);
    let per_panel_cap = (cfg.max_subdivisions / panels.len().max(1)).clamp(64, MAX_PANEL_SUBDIVISIONS);
    // Z must be accurate well below the integrand tolerance, otherwise the
    // adaptive rule chases evaluation noise
    let eval_cfg = PrecisionConfig {
        target_abs_error: (0.05 * tol / total_mass).clamp(MIN_EVAL_TARGET, cfg.target_abs_error.max(MIN_EVAL_TARGET)),
        ..*cfg
    };
    let cfg = &eval_cfg;

    // local Taylor data for every zero that appears in a singular set
    let used: Vec<usize> = {
        let mut v: Vec<usize> = panels.iter().flat_map(|p| p.set.iter().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let locals: Vec<LocalZero> = used
        .par_iter()
        .map(|&i| local_zero(ords[i], cfg))
        .collect::<Result<_>>()?;
    let local_of = |i: usize| locals[used.binary_search(&i).unwrap()];

    let results: Vec<(f64, f64, usize)> = panels
        .par_iter()
        .zip(masses.par_iter())
        .map(|(p, &mass)| -> Result<(f64, f64, usize)> {
            let set: Vec<LocalZero> = p.set.iter().map(|&i| local_of(i)).collect();
            let panel_tol = (tol * mass / total_mass).max(f64::MIN_POSITIVE);
            let mut err_slot: Option<Error> = None;
            let q = integrate(
                |t: f64| match remainder(t, &set, cfg) {
                    Ok(r) => r * weight.eval(t),
                    Err(e) => {
                        err_slot.get_or_insert(e);
                        0.0
                    }
                },
                p.a,
                p.b,
                0.5 * panel_tol,
                per_panel_cap,
            );
            if let Some(e) = err_slot {
                return Err(e);
            }
            let mut value = CompensatedSum::new();
            value.add(q.value);
            let mut err = q.abs_error;
            for z in &set {
                let s = log_singular_integral(z.gamma, p.a, p.b, weight, (0.5 * panel_tol).max(f64::MIN_POSITIVE));
                value.add(s.value);
                err += s.bound;
            }
            Ok((value.value(), err, q.subintervals))
        })
        .collect::<Result<_>>()?;

    // accumulate panel values at the requested break points
    let mut values = Vec::with_capacity(breaks.len());
    let mut increment_errors = Vec::with_capacity(breaks.len() - 1);
    let mut acc = CompensatedSum::new();
    let mut inc_err = 0.0;
    let mut total_err = 0.0;
    let mut subintervals = 0;
    values.push(0.0);
    let mut k = 1;
    while k < breaks.len() && breaks[k] <= breaks[0] {
        values.push(0.0);
        increment_errors.push(0.0);
        k += 1;
    }
    for (p, &(v, e, n)) in panels.iter().zip(&results) {
        acc.add(v);
        inc_err += e;
        total_err += e;
        subintervals += n;
        while k < breaks.len() && breaks[k] <= p.b {
            values.push(acc.value());
            increment_errors.push(inc_err);
            inc_err = 0.0;
            k += 1;
        }
    }
    while k < breaks.len() {
        values.push(acc.value());
        increment_errors.push(0.0);
        k += 1;
    }
    let singularities = ords.partition_point(|&g| g <= b_end) - ords.partition_point(|&g| g < breaks[0]);
    Ok(CumulativeIntegral {
        breaks: breaks.to_vec(),
        values,
        increment_errors,
        stats: PanelStats {
            abs_error_est: total_err,
            subintervals,
            singularities,
        },
    })
}
