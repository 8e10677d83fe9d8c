//! Random walks in stationary random sceneries.
//!
//! Sceneries are generated from i.i.d. laws or from ergodic torus
//! automorphisms ([`scenery`], [`dynsys`]); a simple random walk reads them
//! ([`walk`]); the Kesten-Spitzer limit `sigma * Delta_1` is sampled in
//! [`limitlaw`]; [`stats`] holds the estimators used to check the
//! hypotheses and the distributional conclusion; [`cli`] wires everything
//! into reproducible batch runs.
//!
//! Numeric code is generic over [`real::Real`] (`f32` or `f64`); the aliases
//! below fix the common `f64` instantiations.

pub mod cli;
pub mod config;
pub mod dynsys;
pub mod error;
pub mod limitlaw;
pub mod plot;
pub mod real;
pub mod replicate;
pub mod scenery;
pub mod seed;
pub mod simulate;
pub mod stats;
pub mod walk;

pub use error::{Error, Result};
pub use real::Real;
pub use seed::Seed;

pub type Window = scenery::SceneryWindow<f64>;
pub type Functional = walk::FunctionalSample<f64>;
pub type Ecf = stats::ecf::Ecf<f64>;
pub type KsReport = stats::ks::KsReport<f64>;
pub type AutocovSeries = stats::autocov::AutocovSeries<f64>;
