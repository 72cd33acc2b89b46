//! Double-double arithmetic and error-compensated accumulation.
//!
//! Only the pieces the zeta engine needs are provided: exact phase reduction of
//! `t * ln n` modulo 2π (which is where plain `f64` loses digits at large
//! heights) and Neumaier summation for long sums of oscillating terms.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

pub const LN2: DoubleDouble = DoubleDouble {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

pub const LN_TWO_PI: DoubleDouble = DoubleDouble {
    hi: 1.837_877_066_409_345_6,
    lo: -7.756_588_316_134_483e-17,
};

pub const PI: DoubleDouble = DoubleDouble {
    hi: std::f64::consts::PI,
    lo: 1.224_646_799_147_353_2e-16,
};

pub const TWO_PI: DoubleDouble = DoubleDouble {
    hi: std::f64::consts::TAU,
    lo: 2.449_293_598_294_706_4e-16,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Self {
        let (p, mut e) = two_prod(self.hi, b);
        e += self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }

    #[inline]
    pub fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let (p1, p2) = two_prod(q1, b);
        let (s, mut e) = two_sum(self.hi, -p1);
        e -= p2;
        e += self.lo;
        let q2 = (s + e) / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo }
    }

    /// Multiply by an exact power of two.
    #[inline]
    fn ldexp(self, k: i32) -> Self {
        let f = 2f64.powi(k);
        DoubleDouble {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    pub fn exp(self) -> Self {
        if self.hi == 0.0 && self.lo == 0.0 {
            return DoubleDouble::from_f64(1.0);
        }
        let k = (self.hi / LN2.hi).round();
        let r = self - LN2.mul_f64(k);
        // e^r = (e^{r/512})^512; the Taylor series of the scaled argument
        // converges to double-double accuracy in a dozen terms.
        let s = r.ldexp(-9);
        let mut term = DoubleDouble::from_f64(1.0);
        let mut sum = DoubleDouble::from_f64(1.0);
        for j in 1..=12 {
            term = (term * s).div_f64(j as f64);
            sum = sum + term;
        }
        for _ in 0..9 {
            sum = sum * sum;
        }
        sum.ldexp(k as i32)
    }

    /// Natural logarithm of a positive integer to double-double accuracy.
    pub fn ln_int(n: u64) -> Self {
        debug_assert!(n >= 1);
        if n == 1 {
            return DoubleDouble::default();
        }
        let x = n as f64;
        let y0 = x.ln();
        // one Newton step y <- y + x e^{-y} - 1 doubles the number of digits
        let e = DoubleDouble::from_f64(-y0).exp();
        let corr = e.mul_f64(x) - DoubleDouble::from_f64(1.0);
        DoubleDouble::from_f64(y0) + corr
    }

    /// Natural logarithm of a positive double-double.
    pub fn ln(self) -> Self {
        debug_assert!(self.hi > 0.0);
        let y0 = self.hi.ln();
        let e = DoubleDouble::from_f64(-y0).exp();
        let corr = e * self - DoubleDouble::from_f64(1.0);
        DoubleDouble::from_f64(y0) + corr
    }

    /// Value reduced to `[-π, π]` modulo 2π, returned as `f64`.
    #[inline]
    pub fn rem_two_pi(self) -> f64 {
        let k = (self.hi / TWO_PI.hi).round();
        (self - TWO_PI.mul_f64(k)).to_f64()
    }

    /// `self * t` reduced to `[-π, π]`, returned as `f64`.
    #[inline]
    pub fn phase_mod_two_pi(self, t: f64) -> f64 {
        let p = self.mul_f64(t);
        let k = (p.hi / TWO_PI.hi).round();
        (p - TWO_PI.mul_f64(k)).to_f64()
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, y: Self) -> Self {
        let (s, mut e) = two_sum(self.hi, y.hi);
        let (t, f) = two_sum(self.lo, y.lo);
        e += t;
        let (s, mut e) = quick_two_sum(s, e);
        e += f;
        let (hi, lo) = quick_two_sum(s, e);
        DoubleDouble { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, y: Self) -> Self {
        self + (-y)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, y: Self) -> Self {
        let (p, mut e) = two_prod(self.hi, y.hi);
        e += self.hi * y.lo + self.lo * y.hi;
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

const LN_TABLE_SIZE: u64 = 1 << 16;

fn ln_table() -> &'static [DoubleDouble] {
    static TABLE: OnceLock<Vec<DoubleDouble>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut v = Vec::with_capacity(LN_TABLE_SIZE as usize);
        v.push(DoubleDouble::default());
        for n in 1..LN_TABLE_SIZE {
            v.push(DoubleDouble::ln_int(n));
        }
        v
    })
}

/// `ln n` in double-double, cached for small `n`.
#[inline]
pub fn ln_dd(n: u64) -> DoubleDouble {
    if n < LN_TABLE_SIZE {
        ln_table()[n as usize]
    } else {
        DoubleDouble::ln_int(n)
    }
}

/// `n^{-sigma - i t}` with the phase `t ln n` reduced in double-double.
#[inline]
pub fn n_pow_neg_s(n: u64, sigma: f64, t: f64) -> Complex64 {
    let l = ln_dd(n);
    let mag = (-sigma * l.hi).exp();
    let (s, c) = l.phase_mod_two_pi(t).sin_cos();
    Complex64::new(mag * c, -mag * s)
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of an iterator, in iteration order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl FromIterator<Complex64> for ComplexSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut s = ComplexSum::new();
        for z in iter {
            s.add(z);
        }
        s
    }
}
