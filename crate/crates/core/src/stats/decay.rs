//! Decay of correlations `|Cov_nu(g, h o T^n)|` under a torus map.

use crate::dynsys::{fourier_covariance, Observable, TorusMap, TorusPoint, ORBIT_CAP};
use crate::error::{Error, Result};
use crate::real::{linear_fit, mean_and_se};
use crate::replicate::{replicate, Parallelism};
use crate::seed::{tags, Seed};
use crate::stats::ZERO_SE;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRow {
    pub n: usize,
    /// Signed sample covariance.
    pub cov: f64,
    /// `|cov|`
    pub estimate: f64,
    pub se: f64,
    /// Fourier-exact value when both observables are trigonometric.
    pub exact: f64,
}

impl DecayRow {
    pub fn consistent_with_zero(&self) -> bool {
        crate::stats::consistent_with_zero(self.cov, self.se)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayFit {
    /// `log |Cov| ~ intercept - rate * n`
    Rate {
        rate: f64,
        intercept: f64,
        residual: f64,
        points: usize,
    },
    BelowNoiseFloor {
        points: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub rows: Vec<DecayRow>,
    pub fit: DecayFit,
    pub reps: usize,
}

impl DecayReport {
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "cov", "estimate", "se", "exact"])?;
        for r in &self.rows {
            w.write_record([r.n.to_string(), r.cov.to_string(), r.estimate.to_string(), r.se.to_string(), r.exact.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Sample covariance of `g(x)` and `h(T^n x)` over `reps` Haar-uniform `x`.
pub fn covariance_decay(map: &TorusMap, g: &Observable, h: &Observable, n_max: usize, reps: usize, seed: Seed, par: Parallelism) -> Result<DecayReport> {
    if n_max > ORBIT_CAP {
        return Err(Error::OrbitCapExceeded { requested: n_max, cap: ORBIT_CAP });
    }
    if reps < 2 {
        return Err(Error::InsufficientReps { needed: 2, got: reps });
    }
    let d = map.dim();
    if g.dim() != d || h.dim() != d {
        return Err(Error::InvalidArgument(format!("observables of dimension {} and {} on a {d}-torus", g.dim(), h.dim())));
    }
    let pseed = seed.child(tags::POINTS);
    // per point: g(x) followed by h(T^n x) for n = 0..=n_max
    let orbits: Vec<Vec<f64>> = replicate(reps, pseed, par, |_, rs| {
        let x = TorusPoint::random(d, &mut rs.rng());
        let mut cur = x.fracs().to_vec();
        let mut next = vec![0u128; d];
        let mut out = Vec::with_capacity(n_max + 2);
        out.push(g.eval_fracs::<f64>(&cur));
        for n in 0..=n_max {
            if n > 0 {
                map.forward().apply_into(&cur, &mut next);
                std::mem::swap(&mut cur, &mut next);
            }
            out.push(h.eval_fracs::<f64>(&cur));
        }
        out
    });
    let gvals: Vec<f64> = orbits.iter().map(|o| o[0]).collect();
    let (gbar, _) = mean_and_se(&gvals);
    let mut rows = Vec::with_capacity(n_max + 1);
    let mut prods = vec![0.0; reps];
    let mut hvals = vec![0.0; reps];
    for n in 0..=n_max {
        for (hv, o) in hvals.iter_mut().zip(&orbits) {
            *hv = o[n + 1];
        }
        let (hbar, _) = mean_and_se(&hvals);
        for (p, (gv, hv)) in prods.iter_mut().zip(gvals.iter().zip(&hvals)) {
            *p = (gv - gbar) * (hv - hbar);
        }
        let (cov, se) = mean_and_se(&prods);
        let exact = u32::try_from(n).map(|k| fourier_covariance(map, g, h, k)).unwrap_or(0.0);
        rows.push(DecayRow { n, cov, estimate: cov.abs(), se, exact });
    }
    let fit = fit_rate(&rows);
    Ok(DecayReport { rows, fit, reps })
}

fn fit_rate(rows: &[DecayRow]) -> DecayFit {
    let strong: Vec<&DecayRow> = rows.iter().filter(|r| r.estimate > ZERO_SE * r.se).collect();
    if strong.len() < 3 {
        return DecayFit::BelowNoiseFloor { points: strong.len() };
    }
    let xs: Vec<f64> = strong.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = strong.iter().map(|r| r.estimate.ln()).collect();
    let (intercept, slope, residual) = linear_fit(&xs, &ys);
    DecayFit::Rate { rate: -slope, intercept, residual, points: strong.len() }
}
