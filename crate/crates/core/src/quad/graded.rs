use super::rules::gauss_legendre;
use crate::dd::CompensatedSum;

/// A real weight function on the real line that extends analytically to a
/// neighbourhood of it, with a computable majorant on complex discs.
pub trait Weight: Sync {
    fn eval(&self, t: f64) -> f64;

    /// Upper bound for |w(z)| over the complex disc |z - center| <= radius,
    /// or `f64::INFINITY` if the disc reaches a singularity.
    fn sup_on_disc(&self, center: f64, radius: f64) -> f64;
}

/// w(t) = 1.
#[derive(Debug, Clone, Copy, Default)]
pub struct UnitWeight;

impl Weight for UnitWeight {
    fn eval(&self, _t: f64) -> f64 {
        1.0
    }
    fn sup_on_disc(&self, _center: f64, _radius: f64) -> f64 {
        1.0
    }
}

/// w(t) = 1/(1/4 + t^2), with poles at ±i/2.
#[derive(Debug, Clone, Copy, Default)]
pub struct BsyWeight;

impl Weight for BsyWeight {
    fn eval(&self, t: f64) -> f64 {
        1.0 / (0.25 + t * t)
    }
    fn sup_on_disc(&self, center: f64, radius: f64) -> f64 {
        let d = (center * center + 0.25).sqrt() - radius;
        if d <= 0.0 {
            f64::INFINITY
        } else {
            1.0 / (d * d)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularQuad {
    pub value: f64,
    /// Rigorous-style bound on the discretisation error (plus a roundoff term).
    pub bound: f64,
    pub pieces: usize,
}

impl SingularQuad {
    pub const ZERO: SingularQuad = SingularQuad {
        value: 0.0,
        bound: 0.0,
        pieces: 0,
    };

    pub fn combine(self, o: SingularQuad) -> SingularQuad {
        SingularQuad {
            value: self.value + o.value,
            bound: self.bound + o.bound,
            pieces: self.pieces + o.pieces,
        }
    }
}

const GL_POINTS: i32 = 16;
const MAX_DEPTH: u32 = 40;

/// ∫_a^b log|t - gamma| w(t) dt for any real `gamma`.
///
/// The interval is graded geometrically (ratio 1/2) toward the point of
/// [a, b] nearest to `gamma`. Each piece is integrated with 16-point
/// Gauss-Legendre and carries a Bernstein-ellipse bound; the innermost piece
/// of width below `eps` is integrated in closed form with the weight frozen.
pub fn log_singular_integral<W: Weight + ?Sized>(gamma: f64, a: f64, b: f64, weight: &W, eps: f64) -> SingularQuad {
    if b <= a {
        return SingularQuad::ZERO;
    }
    if gamma > a && gamma < b {
        let left = one_sided(gamma, -1.0, 0.0, gamma - a, weight, eps);
        let right = one_sided(gamma, 1.0, 0.0, b - gamma, weight, eps);
        return left.combine(right);
    }
    if gamma <= a {
        one_sided(a, 1.0, a - gamma, b - a, weight, eps)
    } else {
        one_sided(b, -1.0, gamma - b, b - a, weight, eps)
    }
}

/// ∫_0^len ln(delta + u) w(base + dir u) du with delta >= 0.
fn one_sided<W: Weight + ?Sized>(base: f64, dir: f64, delta: f64, len: f64, weight: &W, eps: f64) -> SingularQuad {
    let mut acc = CompensatedSum::new();
    let mut bound = 0.0;
    let mut pieces = 0;
    let tol_density = eps / len.max(1.0);

    // graded breakpoints len, len/2, ... down to max(eps, delta)
    let mut hi = len;
    let floor = eps.max(delta);
    let mut segs = Vec::new();
    while hi > floor && hi > 0.0 {
        let lo = if hi * 0.5 > floor { hi * 0.5 } else { 0.0 };
        if lo == 0.0 {
            break;
        }
        segs.push((lo, hi));
        hi = lo;
    }
    // [0, hi] remains
    let inner_hi = hi;
    for &(lo, hi) in segs.iter().rev() {
        let r = gl_piece(base, dir, delta, lo, hi, weight, tol_density, 0);
        acc.add(r.value);
        bound += r.bound;
        pieces += r.pieces;
    }
    if inner_hi > 0.0 {
        if delta >= inner_hi || delta > eps {
            let r = gl_piece(base, dir, delta, 0.0, inner_hi, weight, tol_density, 0);
            acc.add(r.value);
            bound += r.bound;
            pieces += r.pieces;
        } else {
            let r = frozen_piece(base, dir, delta, inner_hi, weight);
            acc.add(r.value);
            bound += r.bound;
            pieces += 1;
        }
    }
    SingularQuad {
        value: acc.value(),
        bound,
        pieces,
    }
}

/// ∫_0^e ln(delta+u) du, exactly.
fn log_antiderivative(delta: f64, e: f64) -> f64 {
    let dl = if delta > 0.0 { delta * delta.ln() } else { 0.0 };
    (e + delta) * (e + delta).ln() - dl - e
}

fn frozen_piece<W: Weight + ?Sized>(base: f64, dir: f64, delta: f64, e: f64, weight: &W) -> SingularQuad {
    let w0 = weight.eval(base);
    let value = w0 * log_antiderivative(delta, e);
    // |w(t) - w0| <= |w'| u, |w'| bounded by Cauchy on a disc of radius r
    let r = 0.25;
    let dw = weight.sup_on_disc(base + dir * 0.5 * e, r + e) / r;
    let l = (delta + e)
        .ln()
        .abs()
        .max(if delta > 0.0 { delta.ln().abs() } else { 0.0 });
    let moment = if delta > 0.0 {
        0.5 * e * e * l
    } else {
        e * e * (0.5 * e.ln().abs() + 0.25)
    };
    SingularQuad {
        value,
        bound: dw * moment + 4.0 * f64::EPSILON * value.abs(),
        pieces: 1,
    }
}

#[allow(clippy::too_many_arguments)]
fn gl_piece<W: Weight + ?Sized>(
    base: f64,
    dir: f64,
    delta: f64,
    lo: f64,
    hi: f64,
    weight: &W,
    tol_density: f64,
    depth: u32,
) -> SingularQuad {
    let h = 0.5 * (hi - lo);
    let c = 0.5 * (hi + lo);
    let bound = bernstein_bound(base, dir, delta, c, h, weight);
    let piece_tol = tol_density * 2.0 * h;
    if bound > piece_tol && depth < MAX_DEPTH && h > 0.0 {
        let mid = c;
        let l = gl_piece(base, dir, delta, lo, mid, weight, tol_density, depth + 1);
        let r = gl_piece(base, dir, delta, mid, hi, weight, tol_density, depth + 1);
        return l.combine(r);
    }
    let gl = gauss_legendre();
    let mut acc = CompensatedSum::new();
    let mut abs = 0.0;
    for (x, w) in gl.nodes.iter().zip(&gl.weights) {
        let u = c + h * x;
        let f = (delta + u).ln() * weight.eval(base + dir * u);
        acc.add(w * f);
        abs += w * f.abs();
    }
    SingularQuad {
        value: acc.value() * h,
        bound: bound + 8.0 * f64::EPSILON * abs * h,
        pieces: 1,
    }
}

/// Gauss-Legendre error bound (64/15) M rho^{-2n} / (rho^2 - 1) scaled by h,
/// on the ellipse halfway to the logarithmic branch point at u = -delta.
fn bernstein_bound<W: Weight + ?Sized>(base: f64, dir: f64, delta: f64, c: f64, h: f64, weight: &W) -> f64 {
    if h == 0.0 {
        return 0.0;
    }
    let d = (c + delta) / h;
    if d <= 1.0 {
        return f64::INFINITY;
    }
    // try ellipses from halfway to the branch point down toward the interval,
    // since the weight may have singularities closer than the logarithm's
    let a_max = 0.5 * (d + 1.0);
    let mut best = f64::INFINITY;
    for k in 0..12 {
        let a = 1.0 + (a_max - 1.0) * 0.5f64.powi(k);
        let rho = a + (a * a - 1.0).sqrt();
        let near = h * (d - a);
        let far = h * (d + a);
        let log_max = near.ln().abs().max(far.ln().abs()) + std::f64::consts::PI;
        let wmax = weight.sup_on_disc(base + dir * c, h * a);
        if !wmax.is_finite() {
            continue;
        }
        let m = log_max * wmax;
        let b = (64.0 / 15.0) * m * rho.powi(-2 * GL_POINTS) / (rho * rho - 1.0) * h;
        if b < best {
            best = b;
        } else {
            break;
        }
    }
    best
}
