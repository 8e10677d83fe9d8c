//! Fourth-moment summability `N^{-2} sum |E[xi_k1 xi_k2 xi_k3 xi_k4]|`.
//!
//! Sorting a quadruple gives gaps `(g1, g2, g3)`; by stationarity the
//! expectation depends on the gaps only. A gap triple with span
//! `s = g1 + g2 + g3` occurs at `N - s` starting points, and each sorted
//! quadruple stands for `4! / prod(r!)` ordered ones, `r` running over the
//! sizes of the tied groups.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::replicate::{replicate, Parallelism};
use crate::scenery::{generate_shared, IidLaw, SceneryModel, SceneryWindow};
use crate::seed::Seed;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed};
use std::sync::Arc;

pub const DEFAULT_MAX_N: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentMode {
    /// Exact expectations from the single-site moments (i.i.d. laws only).
    Analytic,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport<T> {
    pub n_grid: Vec<usize>,
    pub estimates: Vec<T>,
    pub se: Vec<T>,
    pub mode: MomentMode,
    /// Rational values for the Rademacher law in analytic mode.
    pub exact: Option<Vec<Ratio<i64>>>,
}

impl<T: Real> MomentReport<T> {
    /// `max / min` of the estimates over the grid.
    pub fn ratio(&self) -> T {
        let max = self.estimates.iter().copied().fold(T::neg_infinity(), T::max);
        let min = self.estimates.iter().copied().fold(T::infinity(), T::min);
        max / min
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["N", "estimate", "se"])?;
        for i in 0..self.n_grid.len() {
            w.write_record([self.n_grid[i].to_string(), self.estimates[i].to_string(), self.se[i].to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MomentOptions {
    pub mode: MomentMode,
    /// Sites per Monte Carlo window.
    pub window_len: usize,
    pub max_n: usize,
    /// Upper bound on `triples * window_len * reps`.
    pub budget: f64,
    pub par: Parallelism,
}

impl Default for MomentOptions {
    fn default() -> Self {
        MomentOptions { mode: MomentMode::MonteCarlo, window_len: 8192, max_n: DEFAULT_MAX_N, budget: 1e11, par: Parallelism::default() }
    }
}

/// A sorted gap triple with its ordering multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapTriple {
    pub gaps: [usize; 3],
    pub multiplicity: u32,
}

impl GapTriple {
    pub fn span(&self) -> usize {
        self.gaps.iter().sum()
    }

    /// Sizes of the tied groups, left to right.
    pub fn groups(&self) -> Vec<u32> {
        let mut groups = vec![1u32];
        for &g in &self.gaps {
            if g == 0 {
                *groups.last_mut().unwrap() += 1;
            } else {
                groups.push(1);
            }
        }
        groups
    }
}

fn factorial(n: u32) -> u32 {
    (1..=n).product()
}

/// All gap triples with span `< n`, in lexicographic order.
pub fn gap_triples(n: usize) -> Vec<GapTriple> {
    let mut out = Vec::new();
    for g1 in 0..n {
        for g2 in 0..n - g1 {
            for g3 in 0..n - g1 - g2 {
                let mut t = GapTriple { gaps: [g1, g2, g3], multiplicity: 0 };
                t.multiplicity = 24 / t.groups().iter().map(|&r| factorial(r)).product::<u32>();
                out.push(t);
            }
        }
    }
    out
}

/// The quadruple sum for an i.i.d. law with second and fourth moments
/// `m2`, `m4` (odd moments vanish). Not normalized by `N^2`.
pub fn iid_fourth_moment_sum<R>(n: usize, m2: R, m4: R) -> R
where
    R: Num + Signed + Clone + FromPrimitive,
{
    let mut total = R::zero();
    for t in gap_triples(n) {
        let e = t.groups().iter().fold(R::one(), |acc, &r| {
            acc * match r {
                1 | 3 => R::zero(),
                2 => m2.clone(),
                _ => m4.clone(),
            }
        });
        let w = R::from_usize(t.multiplicity as usize * (n - t.span())).expect("weight");
        total = total + w * e.abs();
    }
    total
}

/// `N^{-2}` times the Rademacher quadruple sum, exactly.
pub fn rademacher_fourth_moment(n: usize) -> Ratio<i64> {
    let one = Ratio::from_integer(1);
    iid_fourth_moment_sum(n, one, one) / Ratio::from_integer((n * n) as i64)
}

fn check_grid(n_grid: &[usize], max_n: usize) -> Result<usize> {
    let top = *n_grid.iter().max().ok_or(Error::EmptySample)?;
    if n_grid.contains(&0) {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    if top > max_n {
        return Err(Error::BudgetExceeded(format!("N = {top} exceeds the limit {max_n}")));
    }
    Ok(top)
}

pub fn fourth_moment_check<T: Real>(model: &SceneryModel, n_grid: &[usize], reps: usize, seed: Seed, opts: MomentOptions) -> Result<MomentReport<T>> {
    let top = check_grid(n_grid, opts.max_n)?;
    model.validate()?;
    match opts.mode {
        MomentMode::Analytic => analytic(model, n_grid),
        MomentMode::MonteCarlo => monte_carlo(model, n_grid, top, reps, seed, opts),
    }
}

fn analytic<T: Real>(model: &SceneryModel, n_grid: &[usize]) -> Result<MomentReport<T>> {
    let law = match model {
        SceneryModel::Iid(law) => *law,
        _ => return Err(Error::InvalidArgument("analytic fourth moments need an i.i.d. scenery".into())),
    };
    let (estimates, exact) = match law {
        IidLaw::Rademacher => {
            let exact: Vec<Ratio<i64>> = n_grid.iter().map(|&n| rademacher_fourth_moment(n)).collect();
            let est = exact.iter().map(|r| T::lit(*r.numer() as f64 / *r.denom() as f64)).collect();
            (est, Some(exact))
        }
        IidLaw::Gaussian { sd } => {
            let m2 = sd * sd;
            let est = n_grid.iter().map(|&n| T::lit(iid_fourth_moment_sum(n, m2, 3.0 * m2 * m2) / (n * n) as f64)).collect();
            (est, None)
        }
    };
    Ok(MomentReport { n_grid: n_grid.to_vec(), se: vec![T::zero(); n_grid.len()], estimates, mode: MomentMode::Analytic, exact })
}

/// Per-window position averages of `xi_t xi_{t+g1} xi_{t+g1+g2} xi_{t+s}`
/// for every triple.
fn window_means<T: Real>(x: &[T], triples: &[GapTriple], top: usize) -> Vec<T> {
    let len = x.len();
    let pairs: Vec<Vec<T>> = (0..top).map(|a| (0..len - a).map(|t| x[t] * x[t + a]).collect()).collect();
    triples
        .iter()
        .map(|tr| {
            let [g1, g2, g3] = tr.gaps;
            let count = len - tr.span();
            let (a, b) = (&pairs[g1][..count], &pairs[g3][g1 + g2..g1 + g2 + count]);
            let mut acc = T::zero();
            for (p, q) in a.iter().zip(b) {
                acc = acc + *p * *q;
            }
            acc / T::from_usize_lossy(count)
        })
        .collect()
}

fn monte_carlo<T: Real>(model: &SceneryModel, n_grid: &[usize], top: usize, reps: usize, seed: Seed, opts: MomentOptions) -> Result<MomentReport<T>> {
    if reps < 2 {
        return Err(Error::InsufficientReps { needed: 2, got: reps });
    }
    let len = opts.window_len.max(2 * top);
    let triples = gap_triples(top);
    let work = triples.len() as f64 * len as f64 * reps as f64;
    if work > opts.budget {
        return Err(Error::BudgetExceeded(format!("{work:.3e} products requested, budget {:.3e}", opts.budget)));
    }
    let shared = Arc::new(model.clone());
    let half_width = len / 2;
    let mut sum = vec![0.0f64; triples.len()];
    let mut sumsq = vec![0.0f64; triples.len()];
    const CHUNK: usize = 32;
    for start in (0..reps).step_by(CHUNK) {
        let count = CHUNK.min(reps - start);
        let chunk: Vec<Result<Vec<T>>> = replicate(count, seed, opts.par, |i, _| {
            let w: SceneryWindow<T> = generate_shared(Arc::clone(&shared), half_width, seed.replicate(start + i))?;
            Ok(window_means(w.values(), &triples, top))
        });
        for means in chunk {
            for (j, m) in means?.into_iter().enumerate() {
                let m = m.to_f64().unwrap_or(f64::NAN);
                sum[j] += m;
                sumsq[j] += m * m;
            }
        }
    }
    let r = reps as f64;
    let mut estimates = Vec::with_capacity(n_grid.len());
    let mut se = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let (mut est, mut var) = (0.0, 0.0);
        for (j, t) in triples.iter().enumerate().filter(|(_, t)| t.span() < n) {
            let mean = sum[j] / r;
            let v = ((sumsq[j] - r * mean * mean) / (r - 1.0)).max(0.0) / r;
            let w = t.multiplicity as f64 * (n - t.span()) as f64;
            est += w * mean.abs();
            var += w * w * v;
        }
        let n2 = (n * n) as f64;
        estimates.push(T::lit(est / n2));
        se.push(T::lit(var.sqrt() / n2));
    }
    Ok(MomentReport { n_grid: n_grid.to_vec(), estimates, se, mode: MomentMode::MonteCarlo, exact: None })
}
