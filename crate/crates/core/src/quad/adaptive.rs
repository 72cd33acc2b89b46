use super::rules::gk21;
use crate::dd::{CompensatedSum, ComplexSum};
use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Values that the adaptive integrator can accumulate.
pub trait QuadValue: Copy + Send + Sync {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, k: f64) -> Self;
    fn norm(self) -> f64;
    fn sum_ordered(values: impl Iterator<Item = Self>) -> Self;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn norm(self) -> f64 {
        self.abs()
    }
    fn sum_ordered(values: impl Iterator<Item = Self>) -> Self {
        values.collect::<CompensatedSum>().value()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
    fn sum_ordered(values: impl Iterator<Item = Self>) -> Self {
        values.collect::<ComplexSum>().value()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOutcome<V> {
    pub value: V,
    pub abs_error: f64,
    pub subintervals: usize,
    pub converged: bool,
}

struct Piece<V> {
    a: f64,
    b: f64,
    value: V,
    err: f64,
    splittable: bool,
}

impl<V> PartialEq for Piece<V> {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl<V> Eq for Piece<V> {}
impl<V> PartialOrd for Piece<V> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<V> Ord for Piece<V> {
    fn cmp(&self, o: &Self) -> Ordering {
        // unsplittable pieces sink to the bottom of the heap
        (self.splittable, self.err)
            .partial_cmp(&(o.splittable, o.err))
            .unwrap_or(Ordering::Equal)
    }
}

fn evaluate<V: QuadValue, F: FnMut(f64) -> V>(f: &mut F, a: f64, b: f64) -> Piece<V> {
    let (k, g, res_abs) = gk21(&mut *f, a, b);
    let raw = k.sub(g).norm();
    let floor = 50.0 * f64::EPSILON * res_abs;
    let err = raw.max(floor);
    let width_ok = (b - a).abs() > 1e-13 * a.abs().max(b.abs()).max(1e-300) * 8.0;
    Piece {
        a,
        b,
        value: k,
        err,
        splittable: width_ok && raw > floor,
    }
}

/// Globally adaptive Gauss-Kronrod (21/10) integration of `f` over `[a, b]`.
///
/// The error estimate of a subinterval is the raw difference between the
/// Kronrod and Gauss values, floored at the roundoff level.
pub fn integrate<V: QuadValue, F: FnMut(f64) -> V>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_subintervals: usize,
) -> QuadOutcome<V> {
    integrate_with_breaks(f, &[a, b], tol, max_subintervals)
}

/// As [`integrate`], starting from the partition given by `breaks`
/// (ascending, at least two points).
pub fn integrate_with_breaks<V: QuadValue, F: FnMut(f64) -> V>(
    mut f: F,
    breaks: &[f64],
    tol: f64,
    max_subintervals: usize,
) -> QuadOutcome<V> {
    assert!(breaks.len() >= 2);
    let mut heap: BinaryHeap<Piece<V>> = BinaryHeap::new();
    let mut total_err = 0.0;
    for w in breaks.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        let p = evaluate(&mut f, w[0], w[1]);
        total_err += p.err;
        heap.push(p);
    }
    let mut count = heap.len();
    while total_err > tol && count < max_subintervals.max(heap.len()) {
        let worst = match heap.peek() {
            Some(p) if p.splittable => heap.pop().unwrap(),
            _ => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        let left = evaluate(&mut f, worst.a, mid);
        let right = evaluate(&mut f, mid, worst.b);
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        count += 1;
    }
    let mut pieces = heap.into_vec();
    pieces.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(Ordering::Equal));
    let value = V::sum_ordered(pieces.iter().map(|p| p.value));
    let abs_error = pieces.iter().map(|p| p.err).collect::<CompensatedSum>().value();
    QuadOutcome {
        value,
        abs_error,
        subintervals: pieces.len(),
        converged: abs_error <= tol,
    }
}
