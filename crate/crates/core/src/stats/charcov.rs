//! Covariance of characteristic functions of two scenery blocks,
//! `Cov(exp(i sum_{k=n1}^{n2} a_k xi_k), exp(i sum_{k=n3}^{n4} b_k xi_k))`.

use crate::error::{Error, Result};
use crate::replicate::{replicate, Parallelism};
use crate::scenery::{generate_shared, SceneryModel, SceneryWindow};
use crate::seed::Seed;
use crate::stats::ZERO_SE;
use num_complex::Complex64;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockSpec {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub n4: usize,
}

impl BlockSpec {
    pub fn new(n1: usize, n2: usize, n3: usize, n4: usize) -> Result<Self> {
        if !(n1 <= n2 && n2 <= n3 && n3 <= n4) {
            return Err(Error::InvalidBlocks(format!("need n1 <= n2 <= n3 <= n4, got {n1}, {n2}, {n3}, {n4}")));
        }
        Ok(BlockSpec { n1, n2, n3, n4 })
    }

    /// Two blocks of `len` sites separated by `gap = n3 - n2`.
    pub fn with_gap(len: usize, gap: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidBlocks("blocks must be nonempty".into()));
        }
        BlockSpec::new(0, len - 1, len - 1 + gap, 2 * (len - 1) + gap)
    }

    pub fn gap(&self) -> usize {
        self.n3 - self.n2
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharCovEstimate {
    pub cov: Complex64,
    pub modulus: f64,
    pub se: f64,
    pub reps: usize,
}

impl CharCovEstimate {
    pub fn consistent_with_zero(&self) -> bool {
        crate::stats::consistent_with_zero(self.modulus, self.se)
    }
}

pub fn char_cov_check(
    model: &SceneryModel,
    blocks: BlockSpec,
    alpha: &[f64],
    beta: &[f64],
    reps: usize,
    seed: Seed,
    par: Parallelism,
) -> Result<CharCovEstimate> {
    let BlockSpec { n1, n2, n3, n4 } = BlockSpec::new(blocks.n1, blocks.n2, blocks.n3, blocks.n4)?;
    if alpha.len() != n2 - n1 + 1 || beta.len() != n4 - n3 + 1 {
        return Err(Error::InvalidBlocks(format!(
            "coefficient lengths {} and {} do not match block sizes {} and {}",
            alpha.len(),
            beta.len(),
            n2 - n1 + 1,
            n4 - n3 + 1
        )));
    }
    if reps < 2 {
        return Err(Error::InsufficientReps { needed: 2, got: reps });
    }
    model.validate()?;
    let shared = Arc::new(model.clone());
    let draws: Vec<Result<(Complex64, Complex64)>> = replicate(reps, seed, par, |_, rs| {
        let w: SceneryWindow<f64> = generate_shared(Arc::clone(&shared), n4, rs)?;
        let phase = |from: usize, coef: &[f64]| coef.iter().enumerate().map(|(j, c)| c * w.get((from + j) as i64).unwrap()).sum::<f64>();
        Ok((Complex64::from_polar(1.0, phase(n1, alpha)), Complex64::from_polar(1.0, phase(n3, beta))))
    });
    let draws: Vec<(Complex64, Complex64)> = draws.into_iter().collect::<Result<_>>()?;
    let r = reps as f64;
    let mx = draws.iter().map(|d| d.0).sum::<Complex64>() / r;
    let my = draws.iter().map(|d| d.1).sum::<Complex64>() / r;
    let prods: Vec<Complex64> = draws.iter().map(|(x, y)| (x - mx) * (y - my).conj()).collect();
    let cov = prods.iter().sum::<Complex64>() / r;
    let var_re = prods.iter().map(|p| (p.re - cov.re).powi(2)).sum::<f64>() / (r - 1.0);
    let var_im = prods.iter().map(|p| (p.im - cov.im).powi(2)).sum::<f64>() / (r - 1.0);
    Ok(CharCovEstimate { cov, modulus: cov.norm(), se: ((var_re + var_im) / r).sqrt(), reps })
}

/// Estimates for unit coefficients and blocks of `block_len` sites at each gap.
pub fn char_cov_profile(
    model: &SceneryModel,
    block_len: usize,
    gaps: &[usize],
    reps: usize,
    seed: Seed,
    par: Parallelism,
) -> Result<Vec<(usize, CharCovEstimate)>> {
    let ones = vec![1.0; block_len];
    gaps.iter()
        .enumerate()
        .map(|(i, &g)| Ok((g, char_cov_check(model, BlockSpec::with_gap(block_len, g)?, &ones, &ones, reps, seed.replicate(i), par)?)))
        .collect()
}

/// Non-increasing up to `4` combined SE between consecutive gaps, and the
/// last estimate consistent with zero.
pub fn decreases_to_zero(profile: &[(usize, CharCovEstimate)]) -> bool {
    let monotone = profile.windows(2).all(|w| {
        let (a, b) = (&w[0].1, &w[1].1);
        b.modulus <= a.modulus + ZERO_SE * (a.se * a.se + b.se * b.se).sqrt()
    });
    monotone && profile.last().is_some_and(|(_, e)| e.consistent_with_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynsys::{Observable, TorusMap};

    #[test]
    fn block_validation() {
        assert!(matches!(BlockSpec::new(3, 2, 4, 5), Err(Error::InvalidBlocks(_))));
        assert!(matches!(BlockSpec::new(0, 2, 1, 5), Err(Error::InvalidBlocks(_))));
        let b = BlockSpec::with_gap(4, 8).unwrap();
        assert_eq!((b.n1, b.n2, b.n3, b.n4, b.gap()), (0, 3, 11, 14, 8));
        let m = SceneryModel::rademacher();
        assert!(matches!(char_cov_check(&m, b, &[1.0; 3], &[1.0; 4], 10, Seed(0), Parallelism::default()), Err(Error::InvalidBlocks(_))));
    }

    #[test]
    fn zero_coefficients_give_zero() {
        let m = SceneryModel::rademacher();
        let b = BlockSpec::new(0, 1, 2, 3).unwrap();
        let e = char_cov_check(&m, b, &[0.0; 2], &[0.0; 2], 100, Seed(1), Parallelism::default()).unwrap();
        assert_eq!(e.modulus, 0.0);
    }

    #[test]
    fn iid_blocks_are_independent() {
        let m = SceneryModel::rademacher();
        for gap in [1, 3] {
            let b = BlockSpec::with_gap(3, gap).unwrap();
            let e = char_cov_check(&m, b, &[1.0, 0.5, 2.0], &[1.0, -1.0, 0.3], 5000, Seed(gap as u64), Parallelism::default()).unwrap();
            assert!(e.consistent_with_zero(), "{e:?}");
        }
    }

    #[test]
    fn cat_profile_reaches_zero() {
        let m = SceneryModel::torus_direct(TorusMap::cat(), Observable::cos_first(2)).unwrap();
        let p = char_cov_profile(&m, 4, &[1, 2, 4, 8], 20_000, Seed(7), Parallelism::default()).unwrap();
        assert!(decreases_to_zero(&p), "{p:?}");
    }
}
