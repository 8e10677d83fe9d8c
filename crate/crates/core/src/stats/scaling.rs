//! Growth exponent of `Var(Z_n)` in `n`.

use crate::error::{Error, Result};
use crate::real::{linear_fit, mean_and_se};
use crate::replicate::Parallelism;
use crate::scenery::SceneryModel;
use crate::seed::Seed;
use crate::simulate::simulate_functional;
use std::sync::Arc;

pub const MIN_REPS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingPoint {
    pub n: usize,
    /// Sample variance of the raw sums `Z_n`.
    pub variance: f64,
    pub se: f64,
    /// `Var(Z_n) / n^{3/2}`
    pub prefactor: f64,
    pub prefactor_se: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarianceScaling {
    pub points: Vec<ScalingPoint>,
    /// Least-squares slope of `log Var(Z_n)` against `log n`.
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
    pub reps: usize,
}

impl VarianceScaling {
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "variance", "se", "prefactor", "prefactor_se"])?;
        for p in &self.points {
            w.write_record([p.n.to_string(), p.variance.to_string(), p.se.to_string(), p.prefactor.to_string(), p.prefactor_se.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Sample variance with a normal-theory-free standard error
/// `sqrt((m4 - s^4) / R)` from the fourth central moment.
pub fn variance_with_se(values: &[f64]) -> (f64, f64) {
    let r = values.len() as f64;
    let (mean, _) = mean_and_se(values);
    let centered: Vec<f64> = values.iter().map(|v| v - mean).collect();
    let var = centered.iter().map(|c| c * c).sum::<f64>() / (r - 1.0);
    let m4 = centered.iter().map(|c| c.powi(4)).sum::<f64>() / r;
    (var, ((m4 - var * var).max(0.0) / r).sqrt())
}

pub fn variance_scaling(model: &SceneryModel, n_grid: &[usize], reps: usize, seed: Seed, par: Parallelism) -> Result<VarianceScaling> {
    if reps < MIN_REPS {
        return Err(Error::InsufficientReps { needed: MIN_REPS, got: reps });
    }
    if n_grid.len() < 2 || n_grid.contains(&0) {
        return Err(Error::InvalidArgument("need at least two positive n values".into()));
    }
    let shared = Arc::new(model.clone());
    let mut points = Vec::with_capacity(n_grid.len());
    for (i, &n) in n_grid.iter().enumerate() {
        let z = simulate_functional::<f64>(&shared, n, reps, seed.replicate(i), par)?;
        let sums: Vec<f64> = z.iter().map(|s| s.sum).collect();
        let (variance, se) = variance_with_se(&sums);
        if variance <= 0.0 {
            return Err(Error::DegenerateVariance(format!("Var(Z_n) = {variance} at n = {n}")));
        }
        let scale = (n as f64).powf(1.5);
        points.push(ScalingPoint { n, variance, se, prefactor: variance / scale, prefactor_se: se / scale });
    }
    let xs: Vec<f64> = points.iter().map(|p| (p.n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.variance.ln()).collect();
    let (intercept, slope, residual) = linear_fit(&xs, &ys);
    Ok(VarianceScaling { points, slope, intercept, residual, reps })
}
