//! Autocovariances `E[xi_0 xi_p]` and the long-run variance.
//!
//! Each replicate is an independent window of half-width `K >= P`; within a
//! window the products `xi_i xi_{i+p}` are averaged over every admissible
//! position (stationarity), and the standard error comes from the spread of
//! those per-window means across replicates. The scenery is centered by
//! hypothesis, so no sample mean is subtracted.

use crate::error::{Error, Result};
use crate::real::{mean_and_se, ExactSum, Real};
use crate::replicate::{replicate, Parallelism};
use crate::scenery::{generate_shared, SceneryModel, SceneryWindow};
use crate::seed::Seed;
use std::sync::Arc;

pub const DEFAULT_LAGS: usize = 32;
const MIN_HALF_WIDTH: usize = 128;

#[derive(Debug, Clone, PartialEq)]
pub struct AutocovSeries<T> {
    pub lags: Vec<usize>,
    pub rho: Vec<T>,
    pub se: Vec<T>,
    /// `rho(0) + 2 sum_{p>=1} rho(p)`
    pub sigma2: T,
    pub sigma2_se: T,
    /// `sum_p sqrt(1 + p) |rho(p)|`
    pub weighted: T,
    pub weighted_se: T,
    /// Tail indicator `|rho(P)| sqrt(1 + P)`.
    pub tail: T,
    pub reps: usize,
    pub half_width: usize,
}

impl<T: Real> AutocovSeries<T> {
    pub fn max_lag(&self) -> usize {
        self.lags.len() - 1
    }

    /// Partial weighted sum over lags `0..=p`.
    pub fn weighted_to(&self, p: usize) -> T {
        self.rho[..=p].iter().enumerate().fold(T::zero(), |acc, (q, r)| acc + T::from_usize_lossy(1 + q).sqrt() * r.abs())
    }

    /// Increment of the weighted sum from lag `lo` to lag `hi` and its
    /// standard error (lags treated as independent).
    pub fn weighted_increment(&self, lo: usize, hi: usize) -> (T, T) {
        let mut inc = T::zero();
        let mut var = T::zero();
        for q in lo + 1..=hi {
            let w = T::from_usize_lossy(1 + q);
            inc = inc + w.sqrt() * self.rho[q].abs();
            var = var + w * self.se[q] * self.se[q];
        }
        (inc, var.sqrt())
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["lag", "rho", "se"])?;
        for (i, &p) in self.lags.iter().enumerate() {
            w.write_record([p.to_string(), self.rho[i].to_string(), self.se[i].to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AutocovOptions {
    /// Window half-width; defaults to `max(P, 128)`.
    pub half_width: Option<usize>,
    pub par: Parallelism,
}

fn window_lag_means<T: Real>(values: &[T], max_lag: usize) -> Vec<T> {
    (0..=max_lag)
        .map(|p| {
            let mut acc = ExactSum::new();
            for i in 0..values.len() - p {
                acc.add_product(values[i], values[i + p]);
            }
            acc.value() / T::from_usize_lossy(values.len() - p)
        })
        .collect()
}

pub fn autocovariance<T: Real>(model: &SceneryModel, max_lag: usize, reps: usize, seed: Seed, opts: AutocovOptions) -> Result<AutocovSeries<T>> {
    if reps < 2 {
        return Err(Error::InsufficientReps { needed: 2, got: reps });
    }
    model.validate()?;
    let half_width = opts.half_width.unwrap_or(max_lag.max(MIN_HALF_WIDTH)).max(max_lag);
    let shared = Arc::new(model.clone());
    let per_window: Vec<Result<Vec<T>>> = replicate(reps, seed, opts.par, |_, rs| {
        let w: SceneryWindow<T> = generate_shared(Arc::clone(&shared), half_width, rs)?;
        Ok(window_lag_means(w.values(), max_lag))
    });
    let per_window: Vec<Vec<T>> = per_window.into_iter().collect::<Result<_>>()?;

    let mut rho = Vec::with_capacity(max_lag + 1);
    let mut se = Vec::with_capacity(max_lag + 1);
    let mut column = vec![T::zero(); reps];
    for p in 0..=max_lag {
        for (c, w) in column.iter_mut().zip(&per_window) {
            *c = w[p];
        }
        let (m, s) = mean_and_se(&column);
        rho.push(m);
        se.push(s);
    }
    // sigma^2 per window, so its error includes cross-lag correlation
    let two = T::lit(2.0);
    for (c, w) in column.iter_mut().zip(&per_window) {
        *c = w[0] + two * exact_tail_sum(&w[1..]);
    }
    let (sigma2, sigma2_se) = mean_and_se(&column);

    let mut series = AutocovSeries {
        lags: (0..=max_lag).collect(),
        rho,
        se,
        sigma2,
        sigma2_se,
        weighted: T::zero(),
        weighted_se: T::zero(),
        tail: T::zero(),
        reps,
        half_width,
    };
    series.weighted = series.weighted_to(max_lag);
    let (_, inc_se) = series.weighted_increment(0, max_lag);
    series.weighted_se = (inc_se * inc_se + series.se[0] * series.se[0]).sqrt();
    series.tail = series.rho[max_lag].abs() * T::from_usize_lossy(1 + max_lag).sqrt();
    Ok(series)
}

fn exact_tail_sum<T: Real>(v: &[T]) -> T {
    crate::real::exact_sum(v.iter().copied())
}
