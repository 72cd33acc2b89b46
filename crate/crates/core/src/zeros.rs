//! Zero ordinates on the critical line: finding, counting, validation and the
//! plain-text zero file format.

use crate::error::{Error, Result};
use crate::precision::PrecisionConfig;
use crate::zeta::{hardy_z, log_zeta_branch, theta};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

/// Below this height Z has no zeros; used as the first count checkpoint.
const FIRST_CHECKPOINT: f64 = 10.0;
/// Checkpoints are placed where |Z| is at least this large.
const CHECKPOINT_MIN_ABS_Z: f64 = 0.05;
/// Width of a scanning window, in mean zero spacings.
const WINDOW_SPACINGS: f64 = 20.0;
/// Number of step halvings before a window is declared inconsistent.
const MAX_REFINEMENTS: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroSource {
    Computed,
    Imported,
}

/// Strictly ascending ordinates of zeros 1/2 + iγ with 0 < γ <= covered_height.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroList {
    ordinates: Vec<f64>,
    covered_height: f64,
    source: ZeroSource,
    verified: bool,
}

impl ZeroList {
    pub fn new(ordinates: Vec<f64>, covered_height: f64, source: ZeroSource) -> Result<Self> {
        for (i, &g) in ordinates.iter().enumerate() {
            if !(g.is_finite() && g > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "ordinate {g} at index {i} is not positive"
                )));
            }
            if i > 0 && g <= ordinates[i - 1] {
                return Err(Error::NotAscending { line: i + 1 });
            }
        }
        if let Some(&last) = ordinates.last() {
            if last > covered_height {
                return Err(Error::InvalidInput(format!(
                    "ordinate {last} above covered height {covered_height}"
                )));
            }
        }
        Ok(ZeroList {
            ordinates,
            covered_height,
            source,
            verified: false,
        })
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    pub fn covered_height(&self) -> f64 {
        self.covered_height
    }

    pub fn source(&self) -> ZeroSource {
        self.source
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Number of ordinates <= t.
    pub fn count_up_to(&self, t: f64) -> usize {
        self.ordinates.partition_point(|&g| g <= t)
    }

    /// Ordinates in the closed interval [a, b].
    pub fn in_range(&self, a: f64, b: f64) -> &[f64] {
        let lo = self.ordinates.partition_point(|&g| g < a);
        let hi = self.ordinates.partition_point(|&g| g <= b);
        &self.ordinates[lo..hi.max(lo)]
    }

    /// Index of an ordinate within `tol` of t, if any.
    pub fn ordinate_near(&self, t: f64, tol: f64) -> Option<usize> {
        let i = self.ordinates.partition_point(|&g| g < t);
        [i.checked_sub(1), Some(i)]
            .into_iter()
            .flatten()
            .filter(|&j| j < self.ordinates.len())
            .find(|&j| (self.ordinates[j] - t).abs() < tol)
    }

    /// Fails with `ZeroListInsufficient` unless the list covers `t`.
    pub fn require_height(&self, t: f64) -> Result<()> {
        if self.covered_height < t {
            return Err(Error::ZeroListInsufficient {
                message: format!("covers height {} but {t} is needed", self.covered_height),
            });
        }
        Ok(())
    }

    /// Serialise in the zero-file format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# ordinates of zeros 1/2 + i*gamma of the Riemann zeta function");
        let _ = writeln!(
            s,
            "# source: {}",
            match self.source {
                ZeroSource::Computed => "computed",
                ZeroSource::Imported => "imported",
            }
        );
        for g in &self.ordinates {
            let _ = writeln!(s, "{g}");
        }
        let _ = writeln!(s, "{COVERED_PREFIX} {}", self.covered_height);
        s
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    /// Extend a zero file written by [`ZeroList::write_file`] with the
    /// ordinates of `self` above its current covered height (append-only).
    pub fn append_to_file(&self, path: &Path) -> Result<()> {
        if !path.exists() {
            return self.write_file(path);
        }
        let existing = read_zero_file(path)?;
        let from = existing.covered_height;
        let mut f = std::fs::OpenOptions::new().append(true).open(path)?;
        let mut s = String::new();
        for g in self.ordinates.iter().filter(|&&g| g > from) {
            let _ = writeln!(s, "{g}");
        }
        let _ = writeln!(s, "{COVERED_PREFIX} {}", self.covered_height.max(from));
        f.write_all(s.as_bytes())?;
        Ok(())
    }
}

const COVERED_PREFIX: &str = "# covered_height:";

/// Parse the zero-file format: '#' comments, one decimal ordinate per line.
/// A `# covered_height: X` comment sets the covered height (the last one
/// wins); without it the largest ordinate is used.
pub fn import_zeros(text: &str) -> Result<ZeroList> {
    let mut ordinates: Vec<f64> = Vec::new();
    let mut covered: Option<f64> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix(COVERED_PREFIX) {
            let v = parse_decimal(rest.trim()).ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("bad covered height {:?}", rest.trim()),
            })?;
            covered = Some(v);
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let g = parse_decimal(line).ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("not a decimal ordinate: {line:?}"),
        })?;
        if g <= 0.0 {
            return Err(Error::Parse {
                line: line_no,
                message: "ordinates must be positive".into(),
            });
        }
        if let Some(&prev) = ordinates.last() {
            if g <= prev {
                return Err(Error::NotAscending { line: line_no });
            }
        }
        ordinates.push(g);
    }
    let last = ordinates.last().copied().unwrap_or(0.0);
    let covered = covered.unwrap_or(last).max(last);
    ZeroList::new(ordinates, covered, ZeroSource::Imported)
}

fn parse_decimal(s: &str) -> Option<f64> {
    let ok = !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'));
    if !ok {
        return None;
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

pub fn read_zero_file(path: &Path) -> Result<ZeroList> {
    let text = std::fs::read_to_string(path)?;
    import_zeros(&text)
}

/// A hypothetical zero β + iγ off the critical line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroCandidate {
    beta: f64,
    gamma: f64,
}

impl ZeroCandidate {
    pub fn new(beta: f64, gamma: f64) -> Result<Self> {
        if !(beta > 0.5 && beta < 1.0) || !gamma.is_finite() {
            return Err(Error::BetaOutOfRange { beta });
        }
        Ok(ZeroCandidate { beta, gamma })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Mean spacing 2π / log(t/2π) of zero ordinates near t (clamped below).
pub fn mean_spacing(t: f64) -> f64 {
    2.0 * PI / (t.max(20.0) / (2.0 * PI)).ln()
}

/// θ(t)/π + 1 + S(t), an integer-valued function off ordinates.
pub fn argument_count(t: f64, cfg: &PrecisionConfig) -> Result<f64> {
    let l = log_zeta_branch(0.5, t, cfg)?;
    Ok(theta(t) / PI + 1.0 + l.im / PI)
}

fn rounded_count(t: f64, cfg: &PrecisionConfig) -> Result<usize> {
    let c = argument_count(t, cfg)?;
    let r = c.round();
    if (c - r).abs() > 0.25 || r < 0.0 {
        return Err(Error::Inconsistent {
            index: None,
            message: format!("argument count {c} at t = {t} is not close to an integer"),
        });
    }
    Ok(r as usize)
}

/// N(t) from the argument principle, cross-checked against the number of
/// sign changes of Z on (0, t].
pub fn count_zeros(t: f64, cfg: &PrecisionConfig) -> Result<usize> {
    if !(t >= FIRST_CHECKPOINT) {
        return Err(Error::InvalidInput(format!(
            "count_zeros needs t >= {FIRST_CHECKPOINT}"
        )));
    }
    let z = hardy_z(t, cfg)?;
    if z.abs() < cfg.near_zero_threshold() {
        return Err(Error::OnOrdinate { t });
    }
    let brackets = scan_brackets(t, cfg)?;
    let n = rounded_count(t, cfg)?;
    if brackets.len() != n {
        return Err(Error::Inconsistent {
            index: None,
            message: format!("{} sign changes but argument count {n} at t = {t}", brackets.len()),
        });
    }
    Ok(n)
}

#[derive(Debug, Clone, Copy)]
struct Bracket {
    a: f64,
    b: f64,
    za: f64,
    zb: f64,
}

/// Place a checkpoint near `c` where |Z| is comfortably away from zero.
fn nudge_checkpoint(c: f64, cfg: &PrecisionConfig) -> Result<(f64, f64)> {
    let h = 0.013 * mean_spacing(c);
    for k in 0..40 {
        let x = c + k as f64 * h;
        let z = hardy_z(x, cfg)?;
        if z.abs() >= CHECKPOINT_MIN_ABS_Z {
            return Ok((x, z));
        }
    }
    let z = hardy_z(c, cfg)?;
    Ok((c, z))
}

/// Count checkpoints 0 = c_0 < 10 = c_1 < ... < c_K = end.
fn checkpoints(end: f64) -> Vec<f64> {
    let mut cs = vec![0.0];
    if end <= FIRST_CHECKPOINT {
        cs.push(end);
        return cs;
    }
    let mut c = FIRST_CHECKPOINT;
    while c < end {
        cs.push(c);
        c += WINDOW_SPACINGS * mean_spacing(c);
    }
    cs.push(end);
    cs
}

/// Sign-change brackets of Z on (0, end], each window's count matched to
/// the argument count difference between its checkpoints.
fn scan_brackets(end: f64, cfg: &PrecisionConfig) -> Result<Vec<Bracket>> {
    let raw = checkpoints(end);
    let last = raw.len() - 1;
    // interior checkpoints are nudged; the end point keeps its value
    let nudged: Vec<(f64, f64)> = raw
        .par_iter()
        .enumerate()
        .map(|(i, &c)| {
            if i == 0 || i == last {
                Ok((c, hardy_z(c, cfg)?))
            } else {
                nudge_checkpoint(c, cfg)
            }
        })
        .collect::<Result<_>>()?;
    let mut points = vec![nudged[0]];
    for &p in &nudged[1..] {
        if p.0 > points.last().unwrap().0 {
            points.push(p);
        }
    }
    if points.len() < 2 {
        return Ok(Vec::new());
    }
    let counts: Vec<usize> = points
        .par_iter()
        .map(|&(c, _)| {
            if c < FIRST_CHECKPOINT {
                Ok(0)
            } else {
                rounded_count(c, cfg)
            }
        })
        .collect::<Result<_>>()?;
    let windows: Vec<Vec<Bracket>> = (0..points.len() - 1)
        .into_par_iter()
        .map(|i| {
            let expected = counts[i + 1]
                .checked_sub(counts[i])
                .ok_or_else(|| Error::Inconsistent {
                    index: Some(counts[i]),
                    message: "argument count decreased".into(),
                })?;
            scan_window(points[i], points[i + 1], expected, counts[i], cfg)
        })
        .collect::<Result<_>>()?;
    Ok(windows.into_iter().flatten().collect())
}

fn scan_window(
    (a, za): (f64, f64),
    (b, zb): (f64, f64),
    expected: usize,
    first_index: usize,
    cfg: &PrecisionConfig,
) -> Result<Vec<Bracket>> {
    let spacing = mean_spacing(0.5 * (a + b));
    let mut n = (((b - a) / (0.25 * spacing)).ceil() as usize).max(4);
    for _ in 0..=MAX_REFINEMENTS {
        let mut out = Vec::new();
        let mut prev = (a, za);
        for k in 1..=n {
            let x = if k == n { b } else { a + (b - a) * k as f64 / n as f64 };
            let z = if k == n { zb } else { hardy_z(x, cfg)? };
            if z == 0.0 {
                // land exactly on a root: bracket around it
                out.push(Bracket {
                    a: prev.0,
                    b: x,
                    za: prev.1,
                    zb: 0.0,
                });
                prev = (x, z);
                continue;
            }
            if prev.1 != 0.0 && (prev.1 < 0.0) != (z < 0.0) {
                out.push(Bracket {
                    a: prev.0,
                    b: x,
                    za: prev.1,
                    zb: z,
                });
            }
            prev = (x, z);
        }
        if out.len() == expected {
            return Ok(out);
        }
        if out.len() > expected {
            return Err(Error::Inconsistent {
                index: Some(first_index),
                message: format!(
                    "{} sign changes on [{a}, {b}] but the argument count allows {expected}",
                    out.len()
                ),
            });
        }
        n *= 2;
    }
    Err(Error::Inconsistent {
        index: Some(first_index),
        message: format!("missing zeros on [{a}, {b}] after maximal step refinement"),
    })
}

/// Brent's method on a sign-change bracket, to near machine resolution.
fn polish(br: Bracket, cfg: &PrecisionConfig) -> Result<f64> {
    if br.zb == 0.0 {
        return Ok(br.b);
    }
    brent(|x| hardy_z(x, cfg), br.a, br.b, br.za, br.zb)
}

pub(crate) fn brent<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
) -> Result<f64> {
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb == 0.0 {
            return Ok(b);
        }
        if (fa < 0.0) == (fb < 0.0) {
            a = c;
            fa = fc;
            d = b - c;
            e = d;
        }
        if fa.abs() < fb.abs() {
            c = b;
            b = a;
            a = c;
            fc = fb;
            fb = fa;
            fa = fc;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 1e-15;
        let m = 0.5 * (a - b);
        if m.abs() <= tol {
            return Ok(b);
        }
        if e.abs() >= tol && fc.abs() > fb.abs() {
            let s = fb / fc;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qq = fc / fa;
                let r = fb / fa;
                p = s * (2.0 * m * qq * (qq - r) - (b - c) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        c = b;
        fc = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Ok(b)
}

/// All ordinates in (0, T], located by windowed sign-change scanning of Z
/// whose counts are matched against the argument principle, then polished.
pub fn find_zeros_up_to(t_max: f64, cfg: &PrecisionConfig) -> Result<ZeroList> {
    if !(t_max >= 15.0) {
        return Err(Error::InvalidInput("find_zeros_up_to needs T >= 15".into()));
    }
    // count up to a point where |Z| is not small, then drop the excess
    let (end, _) = nudge_checkpoint(t_max, cfg)?;
    let brackets = scan_brackets(end, cfg)?;
    let ordinates: Vec<f64> = brackets.par_iter().map(|&br| polish(br, cfg)).collect::<Result<_>>()?;
    let ordinates: Vec<f64> = ordinates.into_iter().filter(|&g| g <= t_max).collect();
    let mut list = ZeroList::new(ordinates, t_max, ZeroSource::Computed)?;
    list.verified = true;
    Ok(list)
}

/// Check a list against the argument count at its covered height, the
/// smallness of Z at every ordinate and a sign alternation of Z between
/// consecutive ordinates. Returns the list with `verified` set.
pub fn verify_zero_list(mut list: ZeroList, cfg: &PrecisionConfig) -> Result<ZeroList> {
    let h = 1e-5;
    let bad = list
        .ordinates
        .par_iter()
        .enumerate()
        .map(|(i, &g)| -> Result<Option<usize>> {
            let z = hardy_z(g, cfg)?;
            let dz = (hardy_z(g + h, cfg)? - hardy_z(g - h, cfg)?) / (2.0 * h);
            let tol = 1e-8 * dz.abs().max(1.0);
            Ok((z.abs() > tol).then_some(i))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .min();
    if let Some(i) = bad {
        return Err(Error::Inconsistent {
            index: Some(i),
            message: format!("|Z| is not small at ordinate {}", list.ordinates[i]),
        });
    }
    let mids: Vec<f64> = list.ordinates.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let signs: Vec<f64> = mids.par_iter().map(|&m| hardy_z(m, cfg)).collect::<Result<_>>()?;
    for (i, w) in signs.windows(2).enumerate() {
        if (w[0] < 0.0) == (w[1] < 0.0) {
            return Err(Error::Inconsistent {
                index: Some(i + 1),
                message: format!("Z does not change sign at ordinate {}", list.ordinates[i + 1]),
            });
        }
    }
    let height = list.covered_height;
    if height >= FIRST_CHECKPOINT {
        // step back from the covered height if it sits on an ordinate
        let mut probe = height;
        let step = 1e-4 * mean_spacing(height);
        while hardy_z(probe, cfg)?.abs() < 1e-6 {
            probe -= step;
        }
        let listed = list.count_up_to(probe);
        let n = rounded_count(probe, cfg)?;
        if n != listed {
            return Err(Error::Inconsistent {
                index: Some(listed.min(n)),
                message: format!("{listed} ordinates listed up to {probe} but N = {n}"),
            });
        }
    }
    list.verified = true;
    Ok(list)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn import_format_examples() {
        let l = import_zeros("14.134725141734\n21.022039638771\n").unwrap();
        assert_eq!(l.len(), 2);
        let l = import_zeros("# comment\n14.1347\n").unwrap();
        assert_eq!(l.len(), 1);
        assert!(matches!(
            import_zeros("21.0\n14.1\n"),
            Err(Error::NotAscending { line: 2 })
        ));
        assert!(matches!(
            import_zeros("14.1\n1,000.5\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(!import_zeros("14.1\n").unwrap().is_verified());
    }

    #[test]
    fn covered_height_last_wins() {
        let l = import_zeros("14.1\n# covered_height: 15\n21.0\n# covered_height: 22.5\n").unwrap();
        assert_eq!(l.covered_height(), 22.5);
    }

    #[test]
    fn candidate_range() {
        assert!(ZeroCandidate::new(0.5, 10.0).is_err());
        assert!(ZeroCandidate::new(1.0, 10.0).is_err());
        assert!(ZeroCandidate::new(0.75, 10.0).is_ok());
    }

    #[test]
    fn brent_finds_cosine_root() {
        let r = brent(|x| Ok(x.cos()), 1.0, 2.0, 1f64.cos(), 2f64.cos()).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn first_zero() {
        let cfg = PrecisionConfig::default();
        let l = find_zeros_up_to(15.0, &cfg).unwrap();
        assert_eq!(l.len(), 1);
        assert!((l.ordinates()[0] - 14.134_725_141_734_693).abs() < 1e-9);
    }
}
