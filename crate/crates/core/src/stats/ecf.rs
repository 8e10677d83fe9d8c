//! Empirical characteristic function.

use crate::error::{Error, Result};
use crate::real::{mean_and_se, Real};
use num_complex::Complex;

/// `t -> (1/n) sum_j exp(i t s_j)` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecf<T> {
    pub t: Vec<T>,
    pub values: Vec<Complex<T>>,
    /// Componentwise standard errors of the real and imaginary parts.
    pub se: Vec<Complex<T>>,
    pub count: usize,
}

impl<T: Real> Ecf<T> {
    /// Combined standard error `sqrt(se_re^2 + se_im^2)` at grid point `i`.
    pub fn se_norm(&self, i: usize) -> T {
        self.se[i].norm()
    }

    /// `sup_t |phi_self(t) - phi_other(t)|` over a shared grid.
    pub fn sup_distance(&self, other: &Ecf<T>) -> T {
        assert_eq!(self.t, other.t, "grids differ");
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(T::zero(), T::max)
    }
}

pub fn ecf<T: Real>(samples: &[T], t_grid: &[T]) -> Result<Ecf<T>> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    if samples.iter().any(|s| s.is_nan()) {
        return Err(Error::NanSample);
    }
    let mut values = Vec::with_capacity(t_grid.len());
    let mut se = Vec::with_capacity(t_grid.len());
    let mut re = vec![T::zero(); samples.len()];
    let mut im = vec![T::zero(); samples.len()];
    for &t in t_grid {
        for (j, &s) in samples.iter().enumerate() {
            let (sin, cos) = (t * s).sin_cos();
            re[j] = cos;
            im[j] = sin;
        }
        let (mr, sr) = mean_and_se(&re);
        let (mi, si) = mean_and_se(&im);
        let mut v = Complex::new(mr, mi);
        let norm = v.norm();
        if norm > T::one() {
            v = v / norm;
        }
        values.push(v);
        se.push(Complex::new(sr, si));
    }
    Ok(Ecf { t: t_grid.to_vec(), values, se, count: samples.len() })
}

/// `count` evenly spaced points on `[lo, hi]`.
pub fn linear_grid<T: Real>(lo: T, hi: T, count: usize) -> Vec<T> {
    if count == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / T::from_usize_lossy(count - 1);
    (0..count).map(|i| lo + step * T::from_usize_lossy(i)).collect()
}
