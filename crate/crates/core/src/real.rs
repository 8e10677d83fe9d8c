//! Scalar abstraction and order-independent summation.
//!
//! Estimators are written against [`Real`] so they run unchanged on `f32`
//! and `f64`. [`ExactSum`] keeps a list of non-overlapping partials (the
//! Shewchuk/`fsum` scheme) and rounds once at the end, so a total never
//! depends on the order in which its terms arrived.

use num_traits::{Float, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};

/// IEEE floating point scalar usable throughout the crate.
pub trait Real: Float + FromPrimitive + ToPrimitive + Default + Debug + Display + Send + Sync + 'static {
    /// Converts an `f64` literal, rounding to nearest.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    fn two_pi() -> Self {
        Self::lit(std::f64::consts::TAU)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Correctly rounded running sum.
#[derive(Debug, Clone, Default)]
pub struct ExactSum<T> {
    partials: Vec<T>,
}

impl<T: Real> ExactSum<T> {
    pub fn new() -> Self {
        ExactSum { partials: Vec::new() }
    }

    pub fn add(&mut self, value: T) {
        let mut x = value;
        let mut i = 0;
        for j in 0..self.partials.len() {
            let mut y = self.partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != T::zero() {
                self.partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        self.partials.truncate(i);
        self.partials.push(x);
    }

    /// Adds `a * b` without rounding the product.
    pub fn add_product(&mut self, a: T, b: T) {
        let p = a * b;
        let e = a.mul_add(b, -p);
        self.add(p);
        if e != T::zero() {
            self.add(e);
        }
    }

    pub fn value(&self) -> T {
        let p = &self.partials;
        let mut n = p.len();
        if n == 0 {
            return T::zero();
        }
        n -= 1;
        let mut hi = p[n];
        let mut lo = T::zero();
        while n > 0 {
            let x = hi;
            n -= 1;
            let y = p[n];
            hi = x + y;
            let yr = hi - x;
            lo = y - yr;
            if lo != T::zero() {
                break;
            }
        }
        // half-even rounding across the remaining partials
        if n > 0 && ((lo < T::zero() && p[n - 1] < T::zero()) || (lo > T::zero() && p[n - 1] > T::zero())) {
            let y = lo + lo;
            let x = hi + y;
            let yr = x - hi;
            if y == yr {
                hi = x;
            }
        }
        hi
    }
}

impl<T: Real> Extend<T> for ExactSum<T> {
    fn extend<I: IntoIterator<Item = T>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

pub fn exact_sum<T: Real, I: IntoIterator<Item = T>>(values: I) -> T {
    let mut s = ExactSum::new();
    s.extend(values);
    s.value()
}

/// Sample mean and its standard error (`sd / sqrt(n)`, with the `n - 1`
/// variance denominator). The error is zero for a single observation.
pub fn mean_and_se<T: Real>(values: &[T]) -> (T, T) {
    let n = values.len();
    if n == 0 {
        return (T::nan(), T::nan());
    }
    let nf = T::from_usize_lossy(n);
    let mean = exact_sum(values.iter().copied()) / nf;
    if n < 2 {
        return (mean, T::zero());
    }
    let var = sample_variance_about(values, mean);
    (mean, (var / nf).sqrt())
}

/// Unbiased sample variance.
pub fn sample_variance<T: Real>(values: &[T]) -> T {
    let n = values.len();
    if n < 2 {
        return T::nan();
    }
    let mean = exact_sum(values.iter().copied()) / T::from_usize_lossy(n);
    sample_variance_about(values, mean)
}

fn sample_variance_about<T: Real>(values: &[T], mean: T) -> T {
    let mut s = ExactSum::new();
    for &v in values {
        let d = v - mean;
        s.add_product(d, d);
    }
    s.value() / T::from_usize_lossy(values.len() - 1)
}

/// Ordinary least squares fit `y = a + b x`; returns `(a, b, rms residual)`.
pub fn linear_fit<T: Real>(xs: &[T], ys: &[T]) -> (T, T, T) {
    let n = T::from_usize_lossy(xs.len());
    let mx = exact_sum(xs.iter().copied()) / n;
    let my = exact_sum(ys.iter().copied()) / n;
    let mut sxy = ExactSum::new();
    let mut sxx = ExactSum::new();
    for (&x, &y) in xs.iter().zip(ys) {
        sxy.add_product(x - mx, y - my);
        sxx.add_product(x - mx, x - mx);
    }
    let slope = sxy.value() / sxx.value();
    let intercept = my - slope * mx;
    let mut rss = ExactSum::new();
    for (&x, &y) in xs.iter().zip(ys) {
        let r = y - intercept - slope * x;
        rss.add_product(r, r);
    }
    (intercept, slope, (rss.value() / n).sqrt())
}
