//! Riemann-Siegel formula for Z(t) with correction terms C_0..C_4.

use super::theta::theta_asymptotic_dd;
use super::ZValue;
use crate::dd::{ln_dd, DoubleDouble};
use crate::error::{Error, Result};
use crate::precision::MAX_RS_CORRECTION_TERMS;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Smallest t at which the Riemann-Siegel formula is evaluated at all.
pub const RS_T_MIN: f64 = 10.0;

/// Gabcke's constants: |R_K(t)| <= d_K t^{-(2K+3)/4} for t >= 200.
const GABCKE: [f64; 5] = [0.127, 0.053, 0.011, 0.031, 0.017];
const GABCKE_T: f64 = 200.0;
/// Safety factor applied to the bound for t below GABCKE_T.
const LOW_T_SAFETY: f64 = 10.0;

const DEGREE: usize = 120;
const DFT_POINTS: usize = 512;

/// Ψ(1/2 + x) = -cos(2πx² - 5π/8) / cos(2πx), an entire function of x.
fn psi_complex(x: Complex64) -> Complex64 {
    let num = (x * x * (2.0 * PI) - 5.0 * PI / 8.0).cos();
    let den = (x * (2.0 * PI)).cos();
    -num / den
}

/// Taylor coefficients of Ψ(1/2 + x) about x = 0 by a discrete Cauchy
/// integral on the unit circle, where Ψ is bounded and well conditioned.
fn psi_taylor() -> Vec<f64> {
    let m = DFT_POINTS;
    let samples: Vec<Complex64> = (0..m)
        .map(|k| {
            let phi = 2.0 * PI * k as f64 / m as f64;
            psi_complex(Complex64::from_polar(1.0, phi))
        })
        .collect();
    (0..=DEGREE)
        .map(|j| {
            if j % 2 == 1 {
                return 0.0;
            }
            let mut acc = 0.0;
            for (k, v) in samples.iter().enumerate() {
                let phi = 2.0 * PI * ((j * k) % m) as f64 / m as f64;
                acc += (v * Complex64::from_polar(1.0, -phi)).re;
            }
            acc / m as f64
        })
        .collect()
}

fn derivative(p: &[f64], order: usize) -> Vec<f64> {
    let mut q = p.to_vec();
    for _ in 0..order {
        q = q.iter().enumerate().skip(1).map(|(j, c)| c * j as f64).collect();
    }
    q
}

fn add_scaled(acc: &mut Vec<f64>, p: &[f64], k: f64) {
    if acc.len() < p.len() {
        acc.resize(p.len(), 0.0);
    }
    for (a, c) in acc.iter_mut().zip(p) {
        *a += k * c;
    }
}

/// Polynomials in x = p - 1/2 for C_0..C_4.
fn correction_polys() -> &'static [Vec<f64>; 5] {
    static POLYS: OnceLock<[Vec<f64>; 5]> = OnceLock::new();
    POLYS.get_or_init(|| {
        let psi = psi_taylor();
        let d = |k| derivative(&psi, k);
        let p2 = PI * PI;
        let p4 = p2 * p2;
        let p6 = p4 * p2;
        let p8 = p4 * p4;

        let c0 = psi.clone();
        let mut c1 = Vec::new();
        add_scaled(&mut c1, &d(3), -1.0 / (96.0 * p2));
        let mut c2 = Vec::new();
        add_scaled(&mut c2, &d(2), 1.0 / (64.0 * p2));
        add_scaled(&mut c2, &d(6), 1.0 / (18432.0 * p4));
        let mut c3 = Vec::new();
        add_scaled(&mut c3, &d(1), -1.0 / (64.0 * p2));
        add_scaled(&mut c3, &d(5), -1.0 / (3840.0 * p4));
        add_scaled(&mut c3, &d(9), -1.0 / (5308416.0 * p6));
        let mut c4 = Vec::new();
        add_scaled(&mut c4, &psi, 1.0 / (128.0 * p2));
        add_scaled(&mut c4, &d(4), 19.0 / (24576.0 * p4));
        add_scaled(&mut c4, &d(8), 11.0 / (5898240.0 * p6));
        add_scaled(&mut c4, &d(12), 1.0 / (2038431744.0 * p8));
        [c0, c1, c2, c3, c4]
    })
}

fn horner(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// C_k(p) for k = 0..=4 and 0 <= p < 1.
pub fn rs_coefficient(k: usize, p: f64) -> f64 {
    horner(&correction_polys()[k], p - 0.5)
}

/// Remainder bound after the terms C_0..C_k.
pub fn rs_error_bound(t: f64, k: usize) -> f64 {
    let k = k.min(MAX_RS_CORRECTION_TERMS);
    let b = GABCKE[k] * t.powf(-(2.0 * k as f64 + 3.0) / 4.0);
    if t >= GABCKE_T {
        b
    } else {
        LOW_T_SAFETY * b
    }
}

/// Z(t) by the Riemann-Siegel formula using C_0..C_k.
pub fn riemann_siegel_z(t: f64, k: usize) -> Result<ZValue> {
    if !t.is_finite() || t < RS_T_MIN {
        return Err(Error::DomainTooSmall { t, t_min: RS_T_MIN });
    }
    if k > MAX_RS_CORRECTION_TERMS {
        return Err(Error::InvalidInput(format!(
            "at most {MAX_RS_CORRECTION_TERMS} correction terms are available"
        )));
    }
    let (theta, theta_err) = theta_asymptotic_dd(t)?;
    let a = (t / (2.0 * PI)).sqrt();
    let m = a.floor() as u64;
    let p = a - m as f64;

    let mut main = crate::dd::CompensatedSum::new();
    let mut weight_sum = 0.0;
    for n in 1..=m {
        let phase: DoubleDouble = theta - ln_dd(n).mul_f64(t);
        let w = 1.0 / (n as f64).sqrt();
        weight_sum += w;
        main.add(w * phase.rem_two_pi().cos());
    }
    let main = 2.0 * main.value();

    let u = (2.0 * PI / t).sqrt();
    let mut corr = 0.0;
    let mut upow = 1.0;
    for j in 0..=k {
        corr += rs_coefficient(j, p) * upow;
        upow *= u;
    }
    let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
    let value = main + sign * u.sqrt() * corr;
    let bound = rs_error_bound(t, k) + 2.0 * weight_sum * (theta_err + 8.0 * f64::EPSILON);
    Ok(ZValue {
        value,
        error_bound: bound,
        imag_residue: 0.0,
        method: super::ZMethod::RiemannSiegel,
    })
}
