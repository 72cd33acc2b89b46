//! Squarefree resonator coefficients supported on primes in (A, B) and the
//! Λ-weighted ratio
//!
//!   Σ_{mn<=N} Λ(n) sin^μ(h log n) r(m) r(mn) / (√n (log n)^ν)  /  Σ_{n<=N} r(n)².

use crate::arith::{mobius, primes_in_range, von_mangoldt};
use crate::dd::compensated_sum;
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

pub const DEFAULT_ENTRY_CAP: usize = 10_000_000;
const PARAM_RTOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonatorParams {
    pub mu: u32,
    pub nu: u32,
    pub n_max: u64,
    pub h: f64,
    pub l: f64,
    pub a: f64,
    pub b: f64,
    pub override_mode: bool,
}

/// L²(3 log L)^{2ν+1} - (2ν+1) log N, increasing in L > 1.
fn constraint(l: f64, nu: u32, log_n: f64) -> f64 {
    let k = 2 * nu as i32 + 1;
    l * l * (3.0 * l.ln()).powi(k) - k as f64 * log_n
}

/// Root L > 1 of L²(log L³)^{2ν+1} = (2ν+1) log N.
///
/// Fails with `Degenerate` when the resulting A = L²(log L)^{2ν+1} is at
/// most 1, i.e. when (2ν+1) log N <= 3^{2ν+1}: the window (A, B) then
/// starts below 2 and the construction has no asymptotic meaning.
pub fn solve_l(n: u64, nu: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::Degenerate(format!("N = {n} must exceed 1")));
    }
    let k = 2 * nu as i32 + 1;
    let log_n = (n as f64).ln();
    if k as f64 * log_n <= 3f64.powi(k) {
        return Err(Error::Degenerate(format!(
            "N = {n}, nu = {nu}: A = L^2 (log L)^{k} would not exceed 1; use explicit A, B, L"
        )));
    }
    // bracket: constraint(1) < 0, grow the upper end
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    while constraint(hi, nu, log_n) < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > 4.0 * f64::EPSILON * hi {
        let mid = 0.5 * (lo + hi);
        if constraint(mid, nu, log_n) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // one Newton step from the bracket midpoint
    let l = 0.5 * (lo + hi);
    let ll = 3.0 * l.ln();
    let df = 2.0 * l * ll.powi(k) + 3.0 * k as f64 * l * ll.powi(k - 1);
    let newton = l - constraint(l, nu, log_n) / df;
    let l = if newton >= lo && newton <= hi { newton } else { l };
    Ok(l)
}

impl ResonatorParams {
    /// Parameters A = L²(log L)^{2ν+1}, B = L³ with L from [`solve_l`].
    pub fn solved(mu: u32, nu: u32, n_max: u64, h: f64) -> Result<Self> {
        let l = solve_l(n_max, nu)?;
        let p = ResonatorParams {
            mu,
            nu,
            n_max,
            h,
            l,
            a: l * l * l.ln().powi(2 * nu as i32 + 1),
            b: l * l * l,
            override_mode: false,
        };
        p.validate()?;
        Ok(p)
    }

    /// Explicit (A, B, L), bypassing the asymptotic parameter relations.
    pub fn with_override(mu: u32, nu: u32, n_max: u64, h: f64, a: f64, b: f64, l: f64) -> Result<Self> {
        let p = ResonatorParams {
            mu,
            nu,
            n_max,
            h,
            l,
            a,
            b,
            override_mode: true,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        if self.n_max < 2 {
            return bad(format!("N = {} must exceed 1", self.n_max));
        }
        if !(self.h >= 0.0 && self.h <= 1.0) {
            return bad(format!("h = {} outside [0, 1]", self.h));
        }
        if !(self.l > 0.0 && self.a > 0.0 && self.b > 0.0) {
            return bad("L, A, B must be positive".into());
        }
        if !(self.a < self.b) {
            return bad(format!("need A < B, got {} and {}", self.a, self.b));
        }
        if !self.override_mode {
            let k = 2 * self.nu as i32 + 1;
            let close = |x: f64, y: f64| (x - y).abs() <= PARAM_RTOL * y.abs();
            let l = self.l;
            if !close(self.a, l * l * l.ln().powi(k))
                || !close(self.b, l * l * l)
                || !close(l * l * self.b.ln().powi(k), k as f64 * (self.n_max as f64).ln())
            {
                return bad("(L, A, B) violate the parameter relations; set override".into());
            }
        }
        Ok(())
    }

    /// h^μ (log N)^{1/2} (log log N)^{μ-ν+1/2}.
    pub fn normalization(&self) -> f64 {
        let ln = (self.n_max as f64).ln();
        self.h.powi(self.mu as i32) * ln.sqrt() * ln.ln().powf(self.mu as f64 - self.nu as f64 + 0.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignVariant {
    #[serde(rename = "plus")]
    Plus,
    #[serde(rename = "minus")]
    Minus,
}

impl SignVariant {
    pub fn name(self) -> &'static str {
        match self {
            SignVariant::Plus => "plus",
            SignVariant::Minus => "minus",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResonatorTable {
    pub entries: Vec<(u64, f64)>,
    pub sign_variant: SignVariant,
    pub params: ResonatorParams,
}

impl ResonatorTable {
    pub fn r(&self, n: u64) -> f64 {
        match self.entries.binary_search_by_key(&n, |e| e.0) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Primes p with A < p < B.
    pub fn primes(&self) -> Vec<u64> {
        window_primes(self.params.a, self.params.b)
    }

    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut s = String::new();
        let _ = writeln!(s, "# sign {}", self.sign_variant.name());
        let _ = writeln!(
            s,
            "# mu {} nu {} N {} h {} L {} A {} B {} override {}",
            p.mu, p.nu, p.n_max, p.h, p.l, p.a, p.b, p.override_mode
        );
        for &(n, r) in &self.entries {
            let _ = writeln!(s, "{n} {r}");
        }
        s
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// Parses the `n r(n)` format written by [`ResonatorTable::to_text`].
pub fn parse_table(text: &str) -> Result<ResonatorTable> {
    let mut variant = None;
    let mut params = None;
    let mut entries: Vec<(u64, f64)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let perr = |m: &str| Error::Parse {
            line: line_no,
            message: m.to_string(),
        };
        if let Some(rest) = line.strip_prefix('#') {
            let words: Vec<&str> = rest.split_whitespace().collect();
            match words.first() {
                Some(&"sign") => {
                    variant = Some(match words.get(1) {
                        Some(&"plus") => SignVariant::Plus,
                        Some(&"minus") => SignVariant::Minus,
                        _ => return Err(perr("sign must be plus or minus")),
                    })
                }
                Some(&"mu") => {
                    let get = |key: &str| -> Result<&str> {
                        words
                            .iter()
                            .position(|w| *w == key)
                            .and_then(|j| words.get(j + 1).copied())
                            .ok_or_else(|| perr(&format!("missing {key}")))
                    };
                    let num = |key: &str| -> Result<f64> { get(key)?.parse().map_err(|_| perr(&format!("bad {key}"))) };
                    let int = |key: &str| -> Result<u64> { get(key)?.parse().map_err(|_| perr(&format!("bad {key}"))) };
                    params = Some(ResonatorParams {
                        mu: int("mu")? as u32,
                        nu: int("nu")? as u32,
                        n_max: int("N")?,
                        h: num("h")?,
                        l: num("L")?,
                        a: num("A")?,
                        b: num("B")?,
                        override_mode: get("override")? == "true",
                    });
                }
                _ => {}
            }
            continue;
        }
        let mut it = line.split_whitespace();
        let n: u64 = it
            .next()
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| perr("expected integer n"))?;
        let r: f64 = it
            .next()
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| perr("expected real r(n)"))?;
        if it.next().is_some() {
            return Err(perr("trailing fields"));
        }
        if let Some(&(prev, _)) = entries.last() {
            if n <= prev {
                return Err(Error::NotAscending { line: line_no });
            }
        }
        entries.push((n, r));
    }
    let params = params.ok_or_else(|| Error::Parse {
        line: 0,
        message: "missing parameter header".into(),
    })?;
    params.validate()?;
    Ok(ResonatorTable {
        entries,
        sign_variant: variant.unwrap_or(SignVariant::Plus),
        params,
    })
}

pub fn read_table(path: &Path) -> Result<ResonatorTable> {
    parse_table(&std::fs::read_to_string(path)?)
}

fn window_primes(a: f64, b: f64) -> Vec<u64> {
    if b <= 2.0 {
        return Vec::new();
    }
    let lo = if a < 0.0 { 0 } else { a.floor() as u64 + 1 };
    let hi = b.ceil() as u64 - 1;
    primes_in_range(lo, hi)
        .into_iter()
        .filter(|&p| (p as f64) > a && (p as f64) < b)
        .collect()
}

/// r(p) = L (log p)^ν / √p.
fn prime_coefficient(p: u64, params: &ResonatorParams) -> f64 {
    let pf = p as f64;
    params.l * pf.ln().powi(params.nu as i32) / pf.sqrt()
}

/// All squarefree n <= N built from primes in (A, B), by depth-first search.
pub fn build_resonator(params: &ResonatorParams, variant: SignVariant, cap: usize) -> Result<ResonatorTable> {
    params.validate()?;
    let primes = window_primes(params.a, params.b);
    let coeffs: Vec<f64> = primes.iter().map(|&p| prime_coefficient(p, params)).collect();
    let sign = match variant {
        SignVariant::Plus => 1.0,
        SignVariant::Minus => -1.0,
    };
    let mut entries = vec![(1u64, 1.0)];
    // stack of (product, coefficient, next prime index)
    let mut stack = vec![(1u64, 1.0f64, 0usize)];
    while let Some((n, r, start)) = stack.pop() {
        for i in start..primes.len() {
            let m = match n.checked_mul(primes[i]) {
                Some(m) if m <= params.n_max => m,
                _ => break,
            };
            let rm = sign * r * coeffs[i];
            entries.push((m, rm));
            if entries.len() > cap {
                return Err(Error::TableTooLarge { cap });
            }
            stack.push((m, rm, i + 1));
        }
    }
    entries.sort_unstable_by_key(|e| e.0);
    Ok(ResonatorTable {
        entries,
        sign_variant: variant,
        params: *params,
    })
}

/// Σ_{mn<=N} Λ(n) sin^μ(h log n) r(m) r(mn) / (√n (log n)^ν).
///
/// r(mn) ≠ 0 forces mn squarefree, so only n = p prime with p ∤ m
/// contributes and r(m) r(mp) = r(m)² r(p); the sum becomes
/// Σ_p log p sin^μ(h log p) r(p) / (√p (log p)^ν) Σ_{m <= N/p, p ∤ m} r(m)².
pub fn resonator_numerator(table: &ResonatorTable, mu: u32, nu: u32, h: f64) -> f64 {
    let n_max = table.params.n_max;
    let primes = table.primes();
    let terms: Vec<f64> = primes
        .par_iter()
        .map(|&p| {
            let rp = table.r(p);
            if rp == 0.0 {
                return 0.0;
            }
            let lp = (p as f64).ln();
            let weight = lp * (h * lp).sin().powi(mu as i32) * rp / ((p as f64).sqrt() * lp.powi(nu as i32));
            let limit = n_max / p;
            let end = table.entries.partition_point(|e| e.0 <= limit);
            let inner = compensated_sum(table.entries[..end].iter().filter(|e| e.0 % p != 0).map(|e| e.1 * e.1));
            weight * inner
        })
        .collect();
    compensated_sum(terms)
}

/// The same sum by a double loop over all (m, n) with mn <= N.
pub fn resonator_numerator_pair_loop(table: &ResonatorTable, mu: u32, nu: u32, h: f64) -> f64 {
    let n_max = table.params.n_max;
    let mut terms = Vec::new();
    for &(m, rm) in &table.entries {
        for n in 2..=n_max / m {
            let lam = von_mangoldt(n);
            if lam == 0.0 {
                continue;
            }
            let rmn = table.r(m * n);
            if rmn == 0.0 {
                continue;
            }
            let ln = (n as f64).ln();
            terms.push(lam * (h * ln).sin().powi(mu as i32) * rm * rmn / ((n as f64).sqrt() * ln.powi(nu as i32)));
        }
    }
    compensated_sum(terms)
}

/// Σ r(n)².
pub fn resonator_denominator(table: &ResonatorTable) -> f64 {
    compensated_sum(table.entries.iter().map(|e| e.1 * e.1))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma4Check {
    pub ratio_plus: f64,
    pub ratio_minus: f64,
    pub normalized_plus: f64,
    pub normalized_minus: f64,
}

/// Numerator/denominator ratios for both sign variants and their
/// normalizations by h^μ (log N)^{1/2} (log log N)^{μ-ν+1/2}.
pub fn lemma4_check(params: &ResonatorParams, cap: usize) -> Result<Lemma4Check> {
    params.validate()?;
    let ratio = |v| -> Result<f64> {
        let t = build_resonator(params, v, cap)?;
        Ok(resonator_numerator(&t, params.mu, params.nu, params.h) / resonator_denominator(&t))
    };
    let plus = ratio(SignVariant::Plus)?;
    let minus = ratio(SignVariant::Minus)?;
    let norm = params.normalization();
    Ok(Lemma4Check {
        ratio_plus: plus,
        ratio_minus: minus,
        normalized_plus: plus / norm,
        normalized_minus: minus / norm,
    })
}

/// The override example: A = 2, B = 30, L = 1, ν = 0, N = 100.
pub fn toy_params(mu: u32, h: f64) -> ResonatorParams {
    ResonatorParams::with_override(mu, 0, 100, h, 2.0, 30.0, 1.0).expect("toy parameters are valid")
}

/// μ(n) r(n) for every entry, as an independent check of the minus variant.
pub fn apply_mobius(table: &ResonatorTable) -> Vec<(u64, f64)> {
    table.entries.iter().map(|&(n, r)| (n, mobius(n) as f64 * r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{factorize, is_squarefree};
    use proptest::prelude::*;

    #[test]
    fn solve_l_inverts_forward_relation() {
        // L = 2, ν = 0: log N = 4 log 8, N = 8^4
        let l = solve_l(4096, 0).unwrap();
        assert!((l - 2.0).abs() < 1e-12, "{l}");
        assert!(solve_l(5000, 0).unwrap() > l);
        assert!(matches!(solve_l(1_000_000, 2), Err(Error::Degenerate(_))));
        let p = ResonatorParams::solved(1, 1, 10_000_000, 0.1).unwrap();
        assert!(p.a < p.b);
    }

    #[test]
    fn toy_table_matches_brute_force() {
        let p = toy_params(1, 0.1);
        let t = build_resonator(&p, SignVariant::Plus, DEFAULT_ENTRY_CAP).unwrap();
        let mut expected = Vec::new();
        for n in 1..=100u64 {
            let f = factorize(n);
            if is_squarefree(n) && f.iter().all(|&(q, _)| q > 2 && q < 30) {
                let r: f64 = f.iter().map(|&(q, _)| 1.0 / (q as f64).sqrt()).product();
                expected.push((n, r));
            }
        }
        assert_eq!(t.entries.len(), expected.len());
        for (a, b) in t.entries.iter().zip(&expected) {
            assert_eq!(a.0, b.0);
            assert!((a.1 - b.1).abs() < 1e-15);
        }
        assert!((t.r(15) - 1.0 / 15f64.sqrt()).abs() < 1e-15);
        assert_eq!(t.r(105), 0.0);
        assert_eq!(t.r(4), 0.0);
        let m = build_resonator(&p, SignVariant::Minus, DEFAULT_ENTRY_CAP).unwrap();
        assert!((m.r(15) - 1.0 / 15f64.sqrt()).abs() < 1e-15);
        assert!((m.r(3) + 1.0 / 3f64.sqrt()).abs() < 1e-15);
        for (x, y) in apply_mobius(&t).iter().zip(&m.entries) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let p = toy_params(1, 0.1);
        assert!(matches!(
            build_resonator(&p, SignVariant::Plus, 10),
            Err(Error::TableTooLarge { cap: 10 })
        ));
    }

    #[test]
    fn numerator_vanishes_at_h_zero() {
        let p = toy_params(2, 0.0);
        let t = build_resonator(&p, SignVariant::Plus, DEFAULT_ENTRY_CAP).unwrap();
        assert_eq!(resonator_numerator(&t, 2, 0, 0.0), 0.0);
        // derivative at 0 vanishes for μ >= 2
        let slope = |d: f64| resonator_numerator(&t, 2, 0, d) / d;
        assert!((slope(1e-4) / slope(1e-3) - 0.1).abs() < 1e-3);
    }

    #[test]
    fn single_prime_denominator() {
        let p = ResonatorParams::with_override(1, 0, 20, 0.1, 10.0, 12.0, 1.5).unwrap();
        let t = build_resonator(&p, SignVariant::Plus, DEFAULT_ENTRY_CAP).unwrap();
        assert_eq!(t.len(), 2);
        let rp = 1.5 / 11f64.sqrt();
        assert!((resonator_denominator(&t) - (1.0 + rp * rp)).abs() < 1e-15);
    }

    #[test]
    fn ratio_signs_persist_under_scaling() {
        for c in [0.5, 0.75, 1.0, 1.5, 2.0] {
            let p = ResonatorParams::with_override(1, 0, 100, 0.1, 2.0, 30.0, c).unwrap();
            let r = lemma4_check(&p, DEFAULT_ENTRY_CAP).unwrap();
            assert!(r.ratio_plus > 0.0 && r.ratio_minus < 0.0);
        }
    }

    #[test]
    fn table_text_round_trip() {
        let p = toy_params(1, 0.1);
        let t = build_resonator(&p, SignVariant::Minus, DEFAULT_ENTRY_CAP).unwrap();
        let back = parse_table(&t.to_text()).unwrap();
        assert_eq!(back, t);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn support_and_multiplicativity(a in 1.0f64..20.0, w in 2.0f64..60.0, n in 10u64..3000) {
            let p = ResonatorParams::with_override(1, 1, n, 0.1, a, a + w, 1.3).unwrap();
            let t = build_resonator(&p, SignVariant::Plus, DEFAULT_ENTRY_CAP).unwrap();
            for &(m, _) in &t.entries {
                prop_assert!(is_squarefree(m) && m <= n);
                for (q, _) in factorize(m) {
                    prop_assert!((q as f64) > a && (q as f64) < a + w);
                }
            }
            for &(x, rx) in t.entries.iter().take(30) {
                for &(y, ry) in t.entries.iter().take(30) {
                    if x * y <= n && crate::arith::factorize(x).iter().all(|&(q, _)| y % q != 0) {
                        prop_assert!((t.r(x * y) - rx * ry).abs() <= 1e-14 * (rx * ry).abs());
                    }
                }
            }
        }

        #[test]
        fn prime_reduction_matches_pair_loop(a in 1.0f64..10.0, w in 5.0f64..80.0, n in 50u64..2000,
                                             mu in 0u32..3, nu in 0u32..3, h in 0.0f64..0.3,
                                             minus in prop::bool::ANY) {
            let p = ResonatorParams::with_override(mu, nu, n, h, a, a + w, 0.9).unwrap();
            let v = if minus { SignVariant::Minus } else { SignVariant::Plus };
            let t = build_resonator(&p, v, DEFAULT_ENTRY_CAP).unwrap();
            let fast = resonator_numerator(&t, mu, nu, h);
            let slow = resonator_numerator_pair_loop(&t, mu, nu, h);
            prop_assert!((fast - slow).abs() <= 1e-12 * slow.abs().max(1e-300), "{} vs {}", fast, slow);
        }
    }
}
