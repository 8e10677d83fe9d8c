//! Sampling the Kesten-Spitzer limit `Delta_1 = int L_1(x) dB_x`.
//!
//! Conditionally on the Brownian path `b`, `Delta_1` is centered Gaussian
//! with variance `V = int L_1(x)^2 dx`, so a draw is `sqrt(V) * g` with `g`
//! standard normal and independent of `V`. Two discretizations of `V` are
//! offered:
//!
//! * `Walk { m }`: `m^{-3/2} sum_k N_m(k)^2` for a fresh simple walk of `m`
//!   steps (exact integer arithmetic before the final scaling);
//! * `Brownian { m, eps }`: a Gaussian path with `m` increments of variance
//!   `1/m`, occupation binned into cells `[2 eps (j - 1/2), 2 eps (j + 1/2))`.
//!   Binning replaces `L` by its cell averages and loses
//!   `int (L - Lbar)^2 dx`; since `x -> L_1(x)` has quadratic variation
//!   `4 L_1(x) dx` and `int L_1 = 1`, that loss has mean `(2/3) (2 eps)`
//!   to leading order, which is added back.

use crate::error::{Error, Result};
use crate::real::{ExactSum, Real};
use crate::replicate::{replicate_with, Parallelism};
use crate::seed::{tags, Seed};
use crate::walk::{self_intersection, OccupationScratch};
use rand::Rng;
use rand_distr::StandardNormal;
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VMethod {
    Walk { m: usize },
    Brownian { m: usize, eps: f64 },
}

impl VMethod {
    pub fn validate(&self) -> Result<()> {
        match *self {
            VMethod::Walk { m } if m >= 1 => Ok(()),
            VMethod::Brownian { m, eps } if m >= 1 && eps > 0.0 && eps.is_finite() => Ok(()),
            VMethod::Walk { m } => Err(Error::BadResolution(format!("m = {m} must be at least 1"))),
            VMethod::Brownian { m, eps } => Err(Error::BadResolution(format!("need m >= 1 and eps > 0, got m = {m}, eps = {eps}"))),
        }
    }
}

/// How `Delta_1` is built from the path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeltaRoute {
    /// `sqrt(V) * g` with an independent standard normal `g`.
    #[default]
    Conditional,
    /// `m^{-3/4} sum_k N_m(k) G_k` with i.i.d. standard normal `G_k`: the
    /// walk in a Gaussian scenery. Walk method only.
    DirectIntegral,
}

/// One draw of `V = int L_1^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VSample {
    pub value: f64,
    pub method: VMethod,
    /// `sum_k N_m(k)^2` for the walk method.
    pub raw: Option<u128>,
    pub seed: Seed,
}

/// One draw of `sigma * Delta_1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaSample {
    pub delta: f64,
    pub v: f64,
    pub sigma2: f64,
    /// Standard normal with `delta = sqrt(sigma2) * sqrt(v) * g`.
    pub g: f64,
    pub seed: Seed,
}

/// Scratch buffers reused across draws.
#[derive(Debug, Default)]
pub struct LimitScratch {
    occupation: OccupationScratch,
    cells: HashMap<i64, u64>,
}

pub fn sample_v(method: VMethod, seed: Seed) -> Result<VSample> {
    sample_v_in(&mut LimitScratch::default(), method, seed)
}

pub fn sample_v_in(scratch: &mut LimitScratch, method: VMethod, seed: Seed) -> Result<VSample> {
    method.validate()?;
    match method {
        VMethod::Walk { m } => {
            let profile = scratch.occupation.profile(m, seed)?;
            let si = self_intersection(&profile);
            Ok(VSample { value: si.scaled, method, raw: Some(si.raw), seed })
        }
        VMethod::Brownian { m, eps } => {
            let width = 2.0 * eps;
            let sd = (1.0 / m as f64).sqrt();
            let mut rng = seed.rng();
            scratch.cells.clear();
            let mut b = 0.0f64;
            for _ in 0..m {
                let z: f64 = rng.sample(StandardNormal);
                b += sd * z;
                *scratch.cells.entry((b / width).round() as i64).or_insert(0) += 1;
            }
            let squares: u128 = scratch.cells.values().map(|&c| c as u128 * c as u128).sum();
            let binned = squares as f64 / ((m as f64) * (m as f64) * width);
            Ok(VSample { value: binned + 2.0 * width / 3.0, method, raw: None, seed })
        }
    }
}

pub fn sample_delta(sigma2: f64, method: VMethod, route: DeltaRoute, seed: Seed) -> Result<DeltaSample> {
    sample_delta_in(&mut LimitScratch::default(), sigma2, method, route, seed)
}

pub fn sample_delta_in(scratch: &mut LimitScratch, sigma2: f64, method: VMethod, route: DeltaRoute, seed: Seed) -> Result<DeltaSample> {
    if sigma2 < 0.0 || !sigma2.is_finite() {
        return Err(Error::NegativeVariance(sigma2));
    }
    let sigma = sigma2.sqrt();
    let v_seed = seed.child(tags::LIMIT_V);
    match route {
        DeltaRoute::Conditional => {
            let v = sample_v_in(scratch, method, v_seed)?.value;
            let g: f64 = seed.child(tags::GAUSS).rng().sample(StandardNormal);
            Ok(DeltaSample { delta: sigma * (v.sqrt() * g), v, sigma2, g, seed })
        }
        DeltaRoute::DirectIntegral => {
            let VMethod::Walk { m } = method else {
                return Err(Error::InvalidArgument("the direct stochastic integral is implemented for the walk method only".into()));
            };
            method.validate()?;
            let profile = scratch.occupation.profile(m, v_seed)?;
            let si = self_intersection(&profile);
            let mut rng = seed.child(tags::GAUSS).rng();
            let mut acc = ExactSum::new();
            for &c in profile.counts() {
                let gk: f64 = rng.sample(StandardNormal);
                acc.add_product(c as f64, gk);
            }
            let g = acc.value() / (si.raw as f64).sqrt();
            let v = si.scaled;
            Ok(DeltaSample { delta: sigma * (v.sqrt() * g), v, sigma2, g, seed })
        }
    }
}

/// `reps` independent V-draws under `seed`.
pub fn sample_v_batch(method: VMethod, reps: usize, seed: Seed, par: Parallelism) -> Result<Vec<VSample>> {
    method.validate()?;
    replicate_with(reps, seed, par, LimitScratch::default, |s, _, rs| sample_v_in(s, method, rs)).into_iter().collect()
}

/// `reps` independent draws of `sqrt(sigma2) * Delta_1` under `seed`.
pub fn sample_delta_batch(sigma2: f64, method: VMethod, route: DeltaRoute, reps: usize, seed: Seed, par: Parallelism) -> Result<Vec<DeltaSample>> {
    if sigma2 < 0.0 || !sigma2.is_finite() {
        return Err(Error::NegativeVariance(sigma2));
    }
    method.validate()?;
    replicate_with(reps, seed, par, LimitScratch::default, |s, _, rs| sample_delta_in(s, sigma2, method, route, rs)).into_iter().collect()
}

/// `u -> E[exp(-u^2 V / 2)]`, the characteristic function of `Delta_1`
/// computed from V-draws.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaCf<T> {
    pub u: Vec<T>,
    pub value: Vec<T>,
    /// Standard error of each mean.
    pub se: Vec<T>,
}

pub fn delta_cf<T: Real>(u_grid: &[T], v_samples: &[T]) -> Result<DeltaCf<T>> {
    if v_samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let half = T::lit(0.5);
    let mut value = Vec::with_capacity(u_grid.len());
    let mut se = Vec::with_capacity(u_grid.len());
    for &u in u_grid {
        let terms: Vec<T> = v_samples.iter().map(|&v| (-(u * u) * v * half).exp()).collect();
        let (mean, err) = crate::real::mean_and_se(&terms);
        value.push(mean.min(T::one()));
        se.push(err);
    }
    Ok(DeltaCf { u: u_grid.to_vec(), value, se })
}

/// Mean of `V`: `E int L_1^2 = 8 / (3 sqrt(2 pi))`.
pub fn expected_v() -> f64 {
    8.0 / (3.0 * (2.0 * std::f64::consts::PI).sqrt())
}
