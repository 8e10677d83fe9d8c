//! Two-sample Kolmogorov-Smirnov distance.

use crate::error::{Error, Result};
use crate::real::Real;
use std::cmp::Ordering;

/// Asymptotic critical coefficient for a 1% level.
pub const KS_C_001: f64 = 1.628;

#[derive(Debug, Clone, PartialEq)]
pub struct KsReport<T> {
    /// `sup_x |F_a(x) - F_b(x)|`
    pub d: T,
    pub n_a: usize,
    pub n_b: usize,
    /// 1%-level critical value `1.628 sqrt((n_a + n_b) / (n_a n_b))`.
    pub threshold: f64,
    /// Asymptotic p-value from the Kolmogorov distribution.
    pub p_value: f64,
}

fn sorted<T: Real>(v: &[T]) -> Result<Vec<T>> {
    if v.is_empty() {
        return Err(Error::EmptySample);
    }
    if v.iter().any(|x| x.is_nan()) {
        return Err(Error::NanSample);
    }
    let mut s = v.to_vec();
    s.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    Ok(s)
}

/// Kolmogorov survival function `Q(x) = 2 sum_k (-1)^{k-1} exp(-2 k^2 x^2)`.
pub fn kolmogorov_q(x: f64) -> f64 {
    if x < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * x * x).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Exact two-sample statistic by a merged pass over both sorted samples.
pub fn ks_two_sample<T: Real>(a: &[T], b: &[T]) -> Result<KsReport<T>> {
    let a = sorted(a)?;
    let b = sorted(b)?;
    let (na, nb) = (a.len(), b.len());
    let (fa, fb) = (na as f64, nb as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < na && j < nb {
        let x = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < na && a[i] == x {
            i += 1;
        }
        while j < nb && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / fa - j as f64 / fb).abs());
    }
    // once one sample is exhausted the gap only shrinks
    let ne = fa * fb / (fa + fb);
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    Ok(KsReport { d: T::lit(d), n_a: na, n_b: nb, threshold: KS_C_001 * ((fa + fb) / (fa * fb)).sqrt(), p_value: kolmogorov_q(lambda) })
}
