//! Estimators for the hypotheses and the conclusion of the limit theorem.
//!
//! Throughout, an estimate is "consistent with zero" when its magnitude is
//! below [`ZERO_SE`] standard errors.

pub mod autocov;
pub mod charcov;
pub mod decay;
pub mod ecf;
pub mod ks;
pub mod moments;
pub mod scaling;

/// Number of standard errors within which an estimate counts as zero.
pub const ZERO_SE: f64 = 4.0;

pub fn consistent_with_zero(estimate: f64, se: f64) -> bool {
    if se > 0.0 {
        estimate.abs() < ZERO_SE * se
    } else {
        estimate == 0.0
    }
}
