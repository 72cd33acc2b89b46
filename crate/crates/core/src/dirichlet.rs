//! Dirichlet polynomials R(t) = Σ r(n) n^{-it}: exact mean squares, the
//! twisted moment ∫_T^{2T} log ζ(α+i(t+h)) |R(t)|² dt against its main term
//! T Σ_{mn<=N} Λ(n) r(m) conj(r(mn)) / (n^{α+ih} log n), and the resonance
//! statistics built from S₁ differences.

use crate::arith::{von_mangoldt, von_mangoldt_table};
use crate::dd::{compensated_sum, ln_dd, n_pow_neg_s, ComplexSum};
use crate::error::{Error, Result};
use crate::integral::cumulative_log_z_integral;
use crate::precision::PrecisionConfig;
use crate::quad::{integrate_with_breaks, Weight};
use crate::resonator::ResonatorTable;
use crate::zeros::ZeroList;
use crate::zeta::{log_zeta_branch, theta, zeta_em_vertical};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI};
use std::path::Path;

pub const DEFAULT_EPS_MARGIN: f64 = 0.05;
const GRID_CHUNK: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct DirichletPolynomial {
    /// (n, r(n)) ascending in n, with r(n) ≠ 0.
    entries: Vec<(u64, Complex64)>,
}

impl DirichletPolynomial {
    pub fn new(mut entries: Vec<(u64, Complex64)>) -> Result<Self> {
        entries.retain(|e| e.1 != Complex64::new(0.0, 0.0));
        entries.sort_by_key(|e| e.0);
        if entries.iter().any(|e| e.0 == 0) {
            return Err(Error::InvalidInput("coefficient index must be >= 1".into()));
        }
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidInput("duplicate coefficient index".into()));
        }
        Ok(DirichletPolynomial { entries })
    }

    pub fn from_real(entries: &[(u64, f64)]) -> Result<Self> {
        Self::new(entries.iter().map(|&(n, r)| (n, Complex64::new(r, 0.0))).collect())
    }

    pub fn from_resonator(t: &ResonatorTable) -> Self {
        Self::from_real(&t.entries).expect("resonator tables have distinct positive indices")
    }

    /// r(n) = 1/√n for n = 1..=len.
    pub fn inverse_sqrt(len: u64) -> Self {
        Self::new(
            (1..=len)
                .map(|n| (n, Complex64::new(1.0 / (n as f64).sqrt(), 0.0)))
                .collect(),
        )
        .unwrap()
    }

    pub fn entries(&self) -> &[(u64, Complex64)] {
        &self.entries
    }

    /// Largest index with a nonzero coefficient.
    pub fn length(&self) -> u64 {
        self.entries.last().map_or(0, |e| e.0)
    }

    pub fn coefficient(&self, n: u64) -> Complex64 {
        match self.entries.binary_search_by_key(&n, |e| e.0) {
            Ok(i) => self.entries[i].1,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// Σ |r(n)|².
    pub fn sum_sq(&self) -> f64 {
        compensated_sum(self.entries.iter().map(|e| e.1.norm_sqr()))
    }

    /// R(t) = Σ r(n) n^{-it}.
    pub fn eval(&self, t: f64) -> Complex64 {
        let mut s = ComplexSum::new();
        for &(n, r) in &self.entries {
            s.add(r * n_pow_neg_s(n, 0.0, t));
        }
        s.value()
    }
}

/// Reads `n re [im]` lines; '#' starts a comment, so resonator table files
/// are accepted as they are.
pub fn parse_coefficients(text: &str) -> Result<DirichletPolynomial> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let perr = |m: &str| Error::Parse {
            line: i + 1,
            message: m.to_string(),
        };
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() < 2 || f.len() > 3 {
            return Err(perr("expected `n re [im]`"));
        }
        let n: u64 = f[0].parse().map_err(|_| perr("bad index"))?;
        let re: f64 = f[1].parse().map_err(|_| perr("bad real part"))?;
        let im: f64 = match f.get(2) {
            Some(w) => w.parse().map_err(|_| perr("bad imaginary part"))?,
            None => 0.0,
        };
        entries.push((n, Complex64::new(re, im)));
    }
    DirichletPolynomial::new(entries)
}

pub fn read_coefficients(path: &Path) -> Result<DirichletPolynomial> {
    parse_coefficients(&std::fs::read_to_string(path)?)
}

/// R(t) for the polynomial given as a table.
pub fn eval_r(poly: &DirichletPolynomial, t: f64) -> Complex64 {
    poly.eval(t)
}

/// ∫_T^{2T} e^{iλt} dt for λ = log(n/m), phases reduced in double-double.
fn oscillatory_integral(m: u64, n: u64, t: f64) -> Complex64 {
    let lambda = ln_dd(n) - ln_dd(m);
    let l = lambda.to_f64();
    let p1 = lambda.phase_mod_two_pi(t);
    let p2 = lambda.phase_mod_two_pi(2.0 * t);
    (Complex64::from_polar(1.0, p2) - Complex64::from_polar(1.0, p1)) / Complex64::new(0.0, l)
}

/// ∫_T^{2T} |R(t)|² dt in closed form.
pub fn mean_square_exact(poly: &DirichletPolynomial, t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("T = {t} must be positive")));
    }
    let e = poly.entries();
    let off: Vec<f64> = (0..e.len())
        .into_par_iter()
        .map(|i| {
            let (m, rm) = e[i];
            compensated_sum(e[i + 1..].iter().map(|&(n, rn)| {
                // the (m, n) and (n, m) terms are conjugate
                2.0 * (rm * rn.conj() * oscillatory_integral(m, n, t)).re
            }))
        })
        .collect();
    Ok(t * poly.sum_sq() + compensated_sum(off))
}

/// Σ_{m≠n} |r(m) r(n)| · 2/|log(n/m)|, which bounds the off-diagonal part.
pub fn off_diagonal_majorant(poly: &DirichletPolynomial) -> f64 {
    let e = poly.entries();
    let mut s = 0.0;
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            s += 2.0 * 2.0 * e[i].1.norm() * e[j].1.norm() / (ln_dd(e[j].0) - ln_dd(e[i].0)).to_f64();
        }
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Request {
    pub alpha: f64,
    pub h: f64,
    pub t: f64,
    pub eps_margin: f64,
}

impl Lemma3Request {
    pub fn new(alpha: f64, h: f64, t: f64) -> Self {
        Lemma3Request {
            alpha,
            h,
            t,
            eps_margin: DEFAULT_EPS_MARGIN,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.5 && self.alpha <= 2.0) {
            return Err(Error::InvalidInput(format!("alpha = {} outside [1/2, 2]", self.alpha)));
        }
        if !(self.t >= 3.0) {
            return Err(Error::InvalidInput(format!("T = {} below 3", self.t)));
        }
        if !(self.h.is_finite() && self.t + self.h >= 1.0) {
            return Err(Error::InvalidInput(format!(
                "h = {} leaves the range t + h >= 1",
                self.h
            )));
        }
        if !(self.eps_margin > 0.0) {
            return Err(Error::InvalidInput("eps_margin must be positive".into()));
        }
        if self.alpha > 0.5 && self.alpha < 0.5 + self.eps_margin {
            return Err(Error::InvalidInput(format!(
                "alpha = {} closer to 1/2 than eps_margin = {}",
                self.alpha, self.eps_margin
            )));
        }
        Ok(())
    }
}

/// T Σ_{mn<=N} Λ(n) r(m) conj(r(mn)) / (n^{α+ih} log n).
pub fn lemma3_rhs(poly: &DirichletPolynomial, req: &Lemma3Request) -> Complex64 {
    let e = poly.entries();
    let terms: Vec<Complex64> = (0..e.len())
        .into_par_iter()
        .map(|i| {
            let (m, rm) = e[i];
            let mut s = ComplexSum::new();
            // k = mn runs over table entries that are multiples of m
            for &(k, rk) in &e[i + 1..] {
                if k % m != 0 {
                    continue;
                }
                let n = k / m;
                let lam = von_mangoldt(n);
                if lam == 0.0 {
                    continue;
                }
                s.add(rm * rk.conj() * n_pow_neg_s(n, req.alpha, req.h) * (lam / (n as f64).ln()));
            }
            s.value()
        })
        .collect();
    let mut s = ComplexSum::new();
    for z in terms {
        s.add(z);
    }
    s.value() * req.t
}

/// The same sum by a double loop over m in the table and all n <= N/m.
pub fn lemma3_rhs_pair_loop(poly: &DirichletPolynomial, req: &Lemma3Request) -> Complex64 {
    let big_n = poly.length();
    let lam = von_mangoldt_table(big_n);
    let mut s = ComplexSum::new();
    for &(m, rm) in poly.entries() {
        for n in 2..=big_n / m {
            if lam[n as usize] == 0.0 {
                continue;
            }
            let rmn = poly.coefficient(m * n);
            s.add(rm * rmn.conj() * n_pow_neg_s(n, req.alpha, req.h) * (lam[n as usize] / (n as f64).ln()));
        }
    }
    s.value() * req.t
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Lhs {
    pub value_re: f64,
    pub value_im: f64,
    pub abs_error_est: f64,
}

impl Lemma3Lhs {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.value_re, self.value_im)
    }
}

/// |R(t - shift)|² as a quadrature weight.
struct ShiftedPower<'a> {
    poly: &'a DirichletPolynomial,
    shift: f64,
    /// (Σ |r(n)|)² and the coefficients for the disc majorant
    abs_coeffs: Vec<(f64, f64)>,
}

impl<'a> ShiftedPower<'a> {
    fn new(poly: &'a DirichletPolynomial, shift: f64) -> Self {
        ShiftedPower {
            poly,
            shift,
            abs_coeffs: poly.entries().iter().map(|e| ((e.0 as f64).ln(), e.1.norm())).collect(),
        }
    }
}

impl Weight for ShiftedPower<'_> {
    fn eval(&self, t: f64) -> f64 {
        self.poly.eval(t - self.shift).norm_sqr()
    }
    /// |R(z)|² extends as R(z) conj(R(conj z)); each (n/m)^{iz} is at most
    /// (nm)^{radius} on the disc.
    fn sup_on_disc(&self, _center: f64, radius: f64) -> f64 {
        let s: f64 = self.abs_coeffs.iter().map(|&(l, a)| a * (radius * l).exp()).sum();
        s * s
    }
}

/// Gregory endpoint coefficients for differences of order 1..=6.
const GREGORY: [f64; 6] = [
    1.0 / 12.0,
    1.0 / 24.0,
    19.0 / 720.0,
    3.0 / 160.0,
    863.0 / 60480.0,
    275.0 / 24192.0,
];

/// Trapezoid rule with Gregory end corrections on a uniform grid. The
/// interior error is exponentially small for integrands analytic in a strip,
/// so only the ends need correcting.
fn gregory(f: &[Complex64], step: f64) -> Complex64 {
    let n = f.len();
    debug_assert!(n > 2 * GREGORY.len());
    let mut s = ComplexSum::new();
    s.add((f[0] + f[n - 1]) * 0.5);
    for chunk in f[1..n - 1].chunks(1024) {
        s.add(chunk.iter().sum::<Complex64>());
    }
    // forward differences at the start, backward at the end
    let mut fwd: Vec<Complex64> = f[..=GREGORY.len()].to_vec();
    let mut bwd: Vec<Complex64> = f[n - 1 - GREGORY.len()..].iter().rev().copied().collect();
    for (k, c) in GREGORY.iter().enumerate() {
        for i in 0..fwd.len() - 1 - k {
            fwd[i] = fwd[i + 1] - fwd[i];
            bwd[i] = bwd[i] - bwd[i + 1];
        }
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        s.add((bwd[0] + fwd[0] * sign) * -*c);
    }
    s.value() * step
}

/// log ζ(α + it) at t = t0 + jΔ, continued vertically from the standard
/// branch at t0.
fn log_zeta_vertical(alpha: f64, t0: f64, step: f64, count: usize, cfg: &PrecisionConfig) -> Result<Vec<Complex64>> {
    let z = zeta_em_vertical(alpha, t0, step, count, cfg.target_abs_error, cfg.euler_maclaurin_terms)?;
    let mut out = Vec::with_capacity(count);
    let mut prev = log_zeta_branch(alpha, t0, cfg)?;
    out.push(prev);
    for j in 1..count {
        let delta = (z[j] / z[j - 1]).ln();
        let next = if delta.norm() < FRAC_PI_4 {
            Complex64::new(z[j].norm().ln(), prev.im + delta.im)
        } else {
            log_zeta_branch(alpha, t0 + step * j as f64, cfg)?
        };
        out.push(next);
        prev = next;
    }
    Ok(out)
}

/// Samples log ζ(α+i(t+h)) |R(t)|² at t = t0 + jΔ, j < count.
fn moment_samples(
    poly: &DirichletPolynomial,
    req: &Lemma3Request,
    t0: f64,
    step: f64,
    count: usize,
    cfg: &PrecisionConfig,
) -> Result<Vec<Complex64>> {
    let chunks: Vec<(usize, usize)> = (0..count)
        .step_by(GRID_CHUNK)
        .map(|s| (s, (s + GRID_CHUNK).min(count)))
        .collect();
    let values: Vec<Vec<Complex64>> = chunks
        .par_iter()
        .map(|&(a, b)| {
            let start = t0 + a as f64 * step;
            let logs = log_zeta_vertical(req.alpha, start + req.h, step, b - a, cfg)?;
            Ok(logs
                .into_iter()
                .enumerate()
                .map(|(j, l)| l * poly.eval(start + j as f64 * step).norm_sqr())
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(values.into_iter().flatten().collect())
}

fn lhs_off_line(poly: &DirichletPolynomial, req: &Lemma3Request, cfg: &PrecisionConfig) -> Result<Lemma3Lhs> {
    // log ζ is analytic within α - 1/2 of the line
    let d = req.alpha - 0.5;
    let tol = cfg.quad_tol * req.t * poly.sum_sq();
    let mut intervals = ((req.t / (0.25 * d).min(0.25) / 2.0).ceil() as usize).max(2 * GREGORY.len() + 2) * 2;
    let mut f = moment_samples(poly, req, req.t, req.t / intervals as f64, intervals + 1, cfg)?;
    loop {
        let step = req.t / intervals as f64;
        let fine = gregory(&f, step);
        let coarse: Vec<Complex64> = f.iter().step_by(2).copied().collect();
        let err = (fine - gregory(&coarse, 2.0 * step)).norm();
        if err <= tol || 2 * intervals > cfg.max_subdivisions {
            return Ok(Lemma3Lhs {
                value_re: fine.re,
                value_im: fine.im,
                abs_error_est: err,
            });
        }
        let mid = moment_samples(poly, req, req.t + 0.5 * step, step, intervals, cfg)?;
        let mut next = Vec::with_capacity(2 * intervals + 1);
        for (a, b) in f.iter().zip(&mid) {
            next.push(*a);
            next.push(*b);
        }
        next.push(f[intervals]);
        f = next;
        intervals *= 2;
    }
}

/// On the critical line: log|ζ| with the ordinates subtracted, and
/// arg ζ(1/2+iu) = π(N(u) - 1) - θ(u) between ordinates.
fn lhs_critical(
    poly: &DirichletPolynomial,
    req: &Lemma3Request,
    zeros: &ZeroList,
    cfg: &PrecisionConfig,
) -> Result<Lemma3Lhs> {
    let (a, b) = (req.t + req.h, 2.0 * req.t + req.h);
    if a < 0.0 {
        return Err(Error::InvalidInput(
            "T + h must be non-negative on the critical line".into(),
        ));
    }
    zeros.require_height(b)?;
    let w = ShiftedPower::new(poly, req.h);
    let tol = cfg.quad_tol * req.t * poly.sum_sq();
    let re = cumulative_log_z_integral(&[a, b], zeros, &w, 0.5 * tol, cfg)?;
    let ords = zeros.ordinates();
    let mut breaks = vec![a];
    breaks.extend_from_slice(zeros.in_range(a, b));
    breaks.push(b);
    breaks.dedup();
    let im = integrate_with_breaks(
        |u: f64| {
            let n = ords.partition_point(|&g| g <= u) as f64;
            (PI * (n - 1.0) - theta(u)) * w.eval(u)
        },
        &breaks,
        0.5 * tol,
        cfg.max_subdivisions,
    );
    Ok(Lemma3Lhs {
        value_re: re.values[1],
        value_im: im.value,
        abs_error_est: re.stats.abs_error_est + im.abs_error,
    })
}

/// ∫_T^{2T} log ζ(α+i(t+h)) |R(t)|² dt. Off the critical line the integral
/// uses a uniform grid with a sixth-order rule; at α = 1/2 it needs `zeros`
/// covering 2T + h.
pub fn lemma3_lhs(
    poly: &DirichletPolynomial,
    req: &Lemma3Request,
    zeros: Option<&ZeroList>,
    cfg: &PrecisionConfig,
) -> Result<Lemma3Lhs> {
    req.validate()?;
    if req.alpha == 0.5 {
        let zeros = zeros.ok_or_else(|| Error::ZeroListInsufficient {
            message: "alpha = 1/2 needs a zero list".into(),
        })?;
        return lhs_critical(poly, req, zeros, cfg);
    }
    let r = lhs_off_line(poly, req, cfg)?;
    let tol = cfg.quad_tol * req.t * poly.sum_sq();
    if r.abs_error_est > tol {
        return Err(Error::ToleranceNotMet {
            estimate: r.abs_error_est,
            tolerance: tol,
        });
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Comparison {
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub lhs_error_est: f64,
    /// |LHS - RHS| / (N (log TN)^{3/2} Σ|r|²)
    pub normalized_gap: f64,
}

/// N (log TN)^{3/2} Σ|r(n)|².
pub fn lemma3_scale(poly: &DirichletPolynomial, t: f64) -> f64 {
    let n = poly.length().max(1) as f64;
    n * (t * n).ln().powf(1.5) * poly.sum_sq()
}

pub fn lemma3_compare(
    poly: &DirichletPolynomial,
    req: &Lemma3Request,
    zeros: Option<&ZeroList>,
    cfg: &PrecisionConfig,
) -> Result<Lemma3Comparison> {
    let lhs = lemma3_lhs(poly, req, zeros, cfg)?;
    let rhs = lemma3_rhs(poly, req);
    Ok(Lemma3Comparison {
        lhs_re: lhs.value_re,
        lhs_im: lhs.value_im,
        rhs_re: rhs.re,
        rhs_im: rhs.im,
        lhs_error_est: lhs.abs_error_est,
        normalized_gap: (lhs.value() - rhs).norm() / lemma3_scale(poly, req.t),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value_re: f64,
    pub value_im: f64,
    /// Bound on the omitted terms k > k_max.
    pub tail_bound: f64,
}

impl SeriesValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.value_re, self.value_im)
    }
}

/// The moment for α > 1 by integrating log ζ = Σ Λ(k) k^{-s} / log k
/// termwise against |R(t)|² = Σ r(m) conj(r(n)) (n/m)^{it}, over k <= k_max.
pub fn lemma3_series(poly: &DirichletPolynomial, req: &Lemma3Request, k_max: u64) -> Result<SeriesValue> {
    if !(req.alpha > 1.0) {
        return Err(Error::InvalidInput(format!(
            "series needs alpha > 1, got {}",
            req.alpha
        )));
    }
    let big_n = poly.length();
    if k_max <= big_n * big_n {
        return Err(Error::InvalidInput(format!("k_max must exceed N² = {}", big_n * big_n)));
    }
    let lam = von_mangoldt_table(k_max);
    let ks: Vec<u64> = (2..=k_max).filter(|&k| lam[k as usize] != 0.0).collect();
    let e = poly.entries();
    let logs: Vec<_> = e.iter().map(|x| ln_dd(x.0)).collect();
    let pairs: Vec<Complex64> = ks
        .par_iter()
        .map(|&k| {
            let c = n_pow_neg_s(k, req.alpha, req.h) * (lam[k as usize] / (k as f64).ln());
            let lk = ln_dd(k);
            let mut s = ComplexSum::new();
            for (&(m, rm), &lm) in e.iter().zip(&logs) {
                let lmk = lm + lk;
                for (&(n, rn), &ln) in e.iter().zip(&logs) {
                    let w = rm * rn.conj();
                    if n == m * k {
                        s.add(w * req.t);
                        continue;
                    }
                    let lambda = ln - lmk;
                    let p1 = lambda.phase_mod_two_pi(req.t);
                    let p2 = lambda.phase_mod_two_pi(2.0 * req.t);
                    let i = (Complex64::from_polar(1.0, p2) - Complex64::from_polar(1.0, p1))
                        / Complex64::new(0.0, lambda.to_f64());
                    s.add(w * i);
                }
            }
            s.value() * c
        })
        .collect();
    let mut s = ComplexSum::new();
    for z in pairs {
        s.add(z);
    }
    // for k > k_max > N², |log(n/(mk))| >= log(k_max/N) and Λ(k)/log k <= 1
    let abs_sum: f64 = e.iter().map(|x| x.1.norm()).sum();
    let kf = k_max as f64;
    let tail_sum = kf.powf(1.0 - req.alpha) / (req.alpha - 1.0);
    let tail_bound = abs_sum * abs_sum * 2.0 / (kf / big_n as f64).ln() * tail_sum;
    let v = s.value();
    Ok(SeriesValue {
        value_re: v.re,
        value_im: v.im,
        tail_bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceStatistic {
    /// (2/π) Σ Λ(n) r(m) conj(r(mn)) sin²((h/2) log n) / (√n (log n)²) / Σ|r|²
    pub sin_squared: f64,
    /// 2 Σ Λ(n) r(m) conj(r(mn)) sin(h log n) / (√n (log n)²) / Σ|r|²
    pub sin: f64,
}

fn resonance_sums(poly: &DirichletPolynomial, h: f64, pair_loop: bool) -> (f64, f64) {
    let mut sq = ComplexSum::new();
    let mut sn = ComplexSum::new();
    let mut add = |n: u64, rm: Complex64, rmn: Complex64| {
        let ln = (n as f64).ln();
        let base = rm * rmn.conj() * (von_mangoldt(n) / ((n as f64).sqrt() * ln * ln));
        sq.add(base * (0.5 * h * ln).sin().powi(2));
        sn.add(base * (h * ln).sin());
    };
    let e = poly.entries();
    if pair_loop {
        for &(m, rm) in e {
            for n in 2..=poly.length() / m {
                let rmn = poly.coefficient(m * n);
                if rmn != Complex64::new(0.0, 0.0) && von_mangoldt(n) != 0.0 {
                    add(n, rm, rmn);
                }
            }
        }
    } else {
        for (i, &(m, rm)) in e.iter().enumerate() {
            for &(k, rk) in &e[i + 1..] {
                if k % m == 0 && von_mangoldt(k / m) != 0.0 {
                    add(k / m, rm, rk);
                }
            }
        }
    }
    (sq.value().re, sn.value().re)
}

/// Main terms of the S₁-difference resonance ratios, as exact finite sums.
pub fn s1_resonance_statistic(poly: &DirichletPolynomial, h: f64) -> Result<ResonanceStatistic> {
    if !(h >= 0.0 && h <= 1.0) {
        return Err(Error::InvalidInput(format!("h = {h} outside [0, 1]")));
    }
    let (sq, sn) = resonance_sums(poly, h, false);
    let d = poly.sum_sq();
    Ok(ResonanceStatistic {
        sin_squared: 2.0 / PI * sq / d,
        sin: 2.0 * sn / d,
    })
}

/// [`s1_resonance_statistic`] by a double loop over all (m, n).
pub fn s1_resonance_statistic_pair_loop(poly: &DirichletPolynomial, h: f64) -> ResonanceStatistic {
    let (sq, sn) = resonance_sums(poly, h, true);
    let d = poly.sum_sq();
    ResonanceStatistic {
        sin_squared: 2.0 / PI * sq / d,
        sin: 2.0 * sn / d,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resonator::{build_resonator, toy_params, SignVariant, DEFAULT_ENTRY_CAP};
    use proptest::prelude::*;

    fn constant() -> DirichletPolynomial {
        DirichletPolynomial::from_real(&[(1, 1.0)]).unwrap()
    }

    #[test]
    fn eval_basic_identities() {
        let p = DirichletPolynomial::inverse_sqrt(10);
        let at0: f64 = (1..=10).map(|n| 1.0 / (n as f64).sqrt()).sum();
        assert!((p.eval(0.0).re - at0).abs() < 1e-14);
        assert!((p.eval(3.7).conj() - p.eval(-3.7)).norm() < 1e-14);
        assert_eq!(constant().eval(123.4), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn gregory_rule_is_high_order() {
        let f = |x: f64| Complex64::new(x.cos(), (3.0 * x).sin());
        let exact = Complex64::new(2f64.sin() - 1f64.sin(), ((3.0f64).cos() - (6.0f64).cos()) / 3.0);
        let errs: Vec<f64> = [40usize, 80]
            .iter()
            .map(|&m| {
                let h = 1.0 / m as f64;
                let v: Vec<Complex64> = (0..=m).map(|j| f(1.0 + h * j as f64)).collect();
                (gregory(&v, h) - exact).norm()
            })
            .collect();
        assert!(errs[1] < 1e-11, "{errs:?}");
        assert!(errs[0] / errs[1] > 50.0, "{errs:?}");
        // polynomials of degree <= 6 are integrated exactly
        let m = 20;
        let v: Vec<Complex64> = (0..=m).map(|j| Complex64::new((j as f64).powi(6), 0.0)).collect();
        assert!((gregory(&v, 1.0).re - 20f64.powi(7) / 7.0).abs() < 1e-6 * 20f64.powi(7));
    }

    #[test]
    fn mean_square_of_constant_is_t() {
        assert_eq!(mean_square_exact(&constant(), 1e3).unwrap(), 1e3);
    }

    #[test]
    fn mean_square_matches_quadrature() {
        let cfg = PrecisionConfig::default();
        for len in [1u64, 5, 20] {
            let p = DirichletPolynomial::inverse_sqrt(len);
            let t = 1e3;
            let exact = mean_square_exact(&p, t).unwrap();
            let breaks: Vec<f64> = (0..=200).map(|k| t + t * k as f64 / 200.0).collect();
            let q = integrate_with_breaks(|x: f64| p.eval(x).norm_sqr(), &breaks, 1e-12, 100_000);
            assert!(
                (exact - q.value).abs() < cfg.quad_tol.max(1e-9),
                "{len}: {exact} vs {}",
                q.value
            );
            let maj = off_diagonal_majorant(&p);
            assert!((exact - t * p.sum_sq()).abs() <= maj);
        }
    }

    #[test]
    fn rhs_of_constant_vanishes_and_matches_pair_loop() {
        let req = Lemma3Request::new(0.6, 0.1, 1e3);
        assert_eq!(lemma3_rhs(&constant(), &req), Complex64::new(0.0, 0.0));
        let t = build_resonator(&toy_params(1, 0.1), SignVariant::Minus, DEFAULT_ENTRY_CAP).unwrap();
        let p = DirichletPolynomial::from_resonator(&t);
        let a = lemma3_rhs(&p, &req);
        let b = lemma3_rhs_pair_loop(&p, &req);
        assert!((a - b).norm() <= 1e-12 * b.norm());
        let twice = lemma3_rhs(&p, &Lemma3Request::new(0.6, 0.1, 2e3));
        assert!((twice - a * 2.0).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn lhs_at_two_matches_series() {
        let cfg = PrecisionConfig::default();
        let req = Lemma3Request::new(2.0, 0.3, 100.0);
        let lhs = lemma3_lhs(&constant(), &req, None, &cfg).unwrap();
        // Σ Λ(n)/(n² log n) ∫_T^{2T} n^{-i(t+h)} dt, tail beyond K below 1e-9
        let k = 200_000u64;
        let lam = von_mangoldt_table(k);
        let mut s = ComplexSum::new();
        for n in 2..=k {
            if lam[n as usize] == 0.0 {
                continue;
            }
            let c = lam[n as usize] / ((n as f64).powi(2) * (n as f64).ln());
            let l = (n as f64).ln();
            let i = (n_pow_neg_s(n, 0.0, 2.0 * req.t + req.h) - n_pow_neg_s(n, 0.0, req.t + req.h))
                / Complex64::new(0.0, -l);
            s.add(i * c);
        }
        assert!(
            (lhs.value() - s.value()).norm() < 1e-8,
            "{} vs {}",
            lhs.value(),
            s.value()
        );
    }

    #[test]
    fn series_matches_lhs_for_longer_table() {
        let cfg = PrecisionConfig::default();
        let p = DirichletPolynomial::inverse_sqrt(4);
        let req = Lemma3Request::new(2.0, 0.2, 200.0);
        let lhs = lemma3_lhs(&p, &req, None, &cfg).unwrap();
        let s = lemma3_series(&p, &req, 100_000).unwrap();
        assert!(s.tail_bound < 1e-4);
        assert!(
            (lhs.value() - s.value()).norm() < s.tail_bound + 1e-8,
            "{:?} vs {:?}",
            lhs,
            s
        );
    }

    #[test]
    fn lhs_continuous_in_h() {
        let cfg = PrecisionConfig::default();
        let p = DirichletPolynomial::inverse_sqrt(5);
        let a = lemma3_lhs(&p, &Lemma3Request::new(0.8, 0.0, 50.0), None, &cfg).unwrap();
        let b = lemma3_lhs(&p, &Lemma3Request::new(0.8, 1e-6, 50.0), None, &cfg).unwrap();
        assert!((a.value() - b.value()).norm() < 1e-6 * 50.0 * 20.0);
    }

    #[test]
    fn critical_line_lhs_near_off_line_value() {
        let cfg = PrecisionConfig::default();
        let zeros = crate::zeros::find_zeros_up_to(130.0, &cfg).unwrap();
        let p = DirichletPolynomial::inverse_sqrt(3);
        let on = lemma3_lhs(&p, &Lemma3Request::new(0.5, 0.0, 60.0), Some(&zeros), &cfg).unwrap();
        let near = lemma3_lhs(&p, &Lemma3Request::new(0.56, 0.0, 60.0), None, &cfg).unwrap();
        // the moment is continuous in α from the right
        assert!(
            (on.value() - near.value()).norm() < 0.1 * 60.0 * p.sum_sq(),
            "{:?} vs {:?}",
            on,
            near
        );
    }

    #[test]
    fn resonance_statistic_matches_pair_loop() {
        let t = build_resonator(&toy_params(2, 0.1), SignVariant::Plus, DEFAULT_ENTRY_CAP).unwrap();
        let p = DirichletPolynomial::from_resonator(&t);
        for h in [0.0, 0.05, 0.3] {
            let a = s1_resonance_statistic(&p, h).unwrap();
            let b = s1_resonance_statistic_pair_loop(&p, h);
            assert!((a.sin_squared - b.sin_squared).abs() <= 1e-14);
            assert!((a.sin - b.sin).abs() <= 1e-14);
            if h == 0.0 {
                assert_eq!(a.sin_squared, 0.0);
                assert_eq!(a.sin, 0.0);
            } else {
                assert!(a.sin_squared > 0.0);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn mean_square_within_off_diagonal_band(len in 1u64..40, t in 10.0f64..1e5, seed in 0u64..1000) {
            let entries: Vec<(u64, f64)> = (1..=len).map(|n| (n, ((n * 7919 + seed) % 17) as f64 / 8.0 - 1.0)).collect();
            let p = DirichletPolynomial::from_real(&entries).unwrap();
            let exact = mean_square_exact(&p, t).unwrap();
            prop_assert!((exact - t * p.sum_sq()).abs() <= off_diagonal_majorant(&p) + 1e-9 * t * p.sum_sq().max(1.0));
        }
    }
}
