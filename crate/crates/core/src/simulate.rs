//! Monte Carlo draws of the normalized functional `Z_n / n^{3/4}`.

use crate::error::Result;
use crate::real::Real;
use crate::replicate::{replicate_with, Parallelism};
use crate::scenery::{generate_shared, SceneryModel, SceneryWindow};
use crate::seed::{tags, Seed};
use crate::walk::{normalize, sum_by_occupation, FunctionalSample, OccupationScratch};
use std::sync::Arc;

/// Replicate `r` uses an independent walk (`seed.replicate(r) / WALK`) and
/// scenery (`seed.replicate(r) / SCENERY`); the scenery window is sized to
/// the walk's excursion.
pub fn simulate_functional<T: Real>(model: &Arc<SceneryModel>, n: usize, reps: usize, seed: Seed, par: Parallelism) -> Result<Vec<FunctionalSample<T>>> {
    model.validate()?;
    let id = model.id();
    replicate_with(reps, seed, par, OccupationScratch::new, |scratch, _, rs| {
        let walk_seed = rs.child(tags::WALK);
        let scenery_seed = rs.child(tags::SCENERY);
        let profile = scratch.profile(n, walk_seed)?;
        let window: SceneryWindow<T> = generate_shared(Arc::clone(model), profile.excursion() as usize, scenery_seed)?;
        let sum = sum_by_occupation(&window, &profile)?;
        Ok(FunctionalSample { n, sum, normalized: normalize(sum, n), model_id: id.clone(), scenery_seed, walk_seed: Some(walk_seed) })
    })
    .into_iter()
    .collect()
}
