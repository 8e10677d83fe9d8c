//! Stationary sceneries `(xi_k)` on a finite two-sided window.
//!
//! Torus-driven sceneries draw one Haar point `omega` and read the
//! observable along its exact two-sided orbit (the inverse matrix drives
//! negative indices). Auxiliary uniforms `z_k` for the coin-type variants and
//! the values of i.i.d. sceneries come from a counter-addressed stream: index
//! `k` always lands on the same stream position (zig-zag order
//! `0, -1, 1, -2, ...`), so growing a window never disturbs existing values.

use crate::dynsys::{kronecker_grid, Observable, TorusMap, TorusPoint, ORBIT_CAP};
use crate::error::{Error, Result};
use crate::real::{mean_and_se, Real};
use crate::seed::{normal_from_words, open_unit, tags, Seed};
use rand::RngCore;
use rand_chacha::ChaCha8Rng;
use std::io::Write;
use std::sync::Arc;

/// Points used to validate pointwise constraints on observables.
pub const VALIDATION_GRID: usize = 10_000;
const VALIDATION_MC: usize = 100_000;
const POINTWISE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IidLaw {
    Rademacher,
    Gaussian { sd: f64 },
}

/// Law of the scenery.
#[derive(Debug, Clone, PartialEq)]
pub enum SceneryModel {
    Iid(IidLaw),
    /// `xi_k = f(T^k omega)` with `f` centered.
    TorusDirect {
        map: TorusMap,
        f: Observable,
    },
    /// `xi_k = 2 1{z_k <= f(T^k omega)} - 1` with `f` in `[0, 1]`, mean 1/2.
    TorusCoin {
        map: TorusMap,
        f: Observable,
    },
    /// `xi_k = theta_l` on `{F_{l-1} < z_k <= F_l}`, `F_l = f_1 + ... + f_l`
    /// evaluated at `T^k omega`.
    TorusMulti {
        map: TorusMap,
        thetas: Vec<f64>,
        fs: Vec<Observable>,
    },
}

fn check_dim(map: &TorusMap, f: &Observable) -> Result<()> {
    if f.dim() != map.dim() {
        return Err(Error::InvalidModel(format!("observable dimension {} does not match torus dimension {}", f.dim(), map.dim())));
    }
    Ok(())
}

impl SceneryModel {
    pub fn rademacher() -> Self {
        SceneryModel::Iid(IidLaw::Rademacher)
    }

    pub fn gaussian(sd: f64) -> Result<Self> {
        let m = SceneryModel::Iid(IidLaw::Gaussian { sd });
        m.validate()?;
        Ok(m)
    }

    pub fn torus_direct(map: TorusMap, f: Observable) -> Result<Self> {
        let m = SceneryModel::TorusDirect { map, f };
        m.validate()?;
        Ok(m)
    }

    pub fn torus_coin(map: TorusMap, f: Observable) -> Result<Self> {
        let m = SceneryModel::TorusCoin { map, f };
        m.validate()?;
        Ok(m)
    }

    pub fn torus_multi(map: TorusMap, thetas: Vec<f64>, fs: Vec<Observable>) -> Result<Self> {
        let m = SceneryModel::TorusMulti { map, thetas, fs };
        m.validate()?;
        Ok(m)
    }

    /// Checks the model's invariants (centering, ranges, partition of unity).
    pub fn validate(&self) -> Result<()> {
        match self {
            SceneryModel::Iid(IidLaw::Rademacher) => Ok(()),
            SceneryModel::Iid(IidLaw::Gaussian { sd }) => {
                if sd.is_finite() && *sd >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidModel(format!("gaussian sd must be finite and nonnegative, got {sd}")))
                }
            }
            SceneryModel::TorusDirect { map, f } => {
                check_dim(map, f)?;
                if f.declared_mean().abs() > POINTWISE_TOL {
                    return Err(Error::InvalidModel(format!("observable must be centered, mean is {}", f.declared_mean())));
                }
                Ok(())
            }
            SceneryModel::TorusCoin { map, f } => {
                check_dim(map, f)?;
                if (f.declared_mean() - 0.5).abs() > POINTWISE_TOL {
                    return Err(Error::InvalidModel(format!("coin observable must have mean 1/2, got {}", f.declared_mean())));
                }
                for p in kronecker_grid(map.dim(), VALIDATION_GRID) {
                    let v: f64 = f.eval(&p);
                    if !(-POINTWISE_TOL..=1.0 + POINTWISE_TOL).contains(&v) {
                        return Err(Error::InvalidModel(format!("coin observable leaves [0, 1]: {v} at {:?}", p.coords())));
                    }
                }
                Ok(())
            }
            SceneryModel::TorusMulti { map, thetas, fs } => {
                if fs.len() < 2 || thetas.len() != fs.len() {
                    return Err(Error::InvalidModel(format!("need p >= 2 observables and as many thetas (got {} and {})", fs.len(), thetas.len())));
                }
                if thetas.iter().any(|t| !t.is_finite()) {
                    return Err(Error::InvalidModel("thetas must be finite".into()));
                }
                for f in fs {
                    check_dim(map, f)?;
                }
                for p in kronecker_grid(map.dim(), VALIDATION_GRID) {
                    let mut total = 0.0;
                    for f in fs {
                        let v: f64 = f.eval(&p);
                        if v < -POINTWISE_TOL {
                            return Err(Error::InvalidModel(format!("weight observable is negative: {v}")));
                        }
                        total += v;
                    }
                    if (total - 1.0).abs() > POINTWISE_TOL {
                        return Err(Error::InvalidModel(format!("weights sum to {total}, not 1")));
                    }
                }
                // Monte Carlo centering: sum_j theta_j f_j has Haar mean zero
                let mut rng = Seed(0).child(tags::VALIDATE).rng();
                let vals: Vec<f64> = (0..VALIDATION_MC)
                    .map(|_| {
                        let p = TorusPoint::random(map.dim(), &mut rng);
                        thetas.iter().zip(fs).map(|(t, f)| t * f.eval::<f64>(&p)).sum()
                    })
                    .collect();
                let (mean, se) = mean_and_se(&vals);
                let centered = if se > 0.0 { mean.abs() < 4.0 * se } else { mean.abs() <= 1e-12 };
                if !centered {
                    return Err(Error::InvalidModel(format!("sum theta_j f_j is not centered: mean {mean}, se {se}")));
                }
                Ok(())
            }
        }
    }

    /// Short stable identifier used in reports.
    pub fn id(&self) -> String {
        match self {
            SceneryModel::Iid(IidLaw::Rademacher) => "iid_rademacher".into(),
            SceneryModel::Iid(IidLaw::Gaussian { sd }) => format!("iid_gaussian(sd={sd})"),
            SceneryModel::TorusDirect { map, .. } => format!("torus_direct{:?}", map.matrix()),
            SceneryModel::TorusCoin { map, .. } => format!("torus_coin{:?}", map.matrix()),
            SceneryModel::TorusMulti { map, thetas, .. } => format!("torus_multi{:?}{thetas:?}", map.matrix()),
        }
    }

    pub fn map(&self) -> Option<&TorusMap> {
        match self {
            SceneryModel::Iid(_) => None,
            SceneryModel::TorusDirect { map, .. } | SceneryModel::TorusCoin { map, .. } | SceneryModel::TorusMulti { map, .. } => Some(map),
        }
    }

    /// Almost-sure bound on `|xi_k|` (infinite for Gaussian sceneries).
    pub fn sup_bound(&self) -> f64 {
        match self {
            SceneryModel::Iid(IidLaw::Rademacher) | SceneryModel::TorusCoin { .. } => 1.0,
            SceneryModel::Iid(IidLaw::Gaussian { sd }) => {
                if *sd == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            SceneryModel::TorusDirect { f, .. } => f.sup_bound(),
            SceneryModel::TorusMulti { thetas, .. } => thetas.iter().fold(0.0f64, |m, t| m.max(t.abs())),
        }
    }
}

/// Values `xi_{-K}, ..., xi_K` of one scenery realization.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneryWindow<T = f64> {
    half_width: usize,
    values: Vec<T>,
    model: Arc<SceneryModel>,
    seed: Seed,
    streams: SceneryStreams,
}

impl<T: Real> SceneryWindow<T> {
    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values ordered from index `-K` to `K`.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn model(&self) -> &Arc<SceneryModel> {
        &self.model
    }

    pub fn model_id(&self) -> String {
        self.model.id()
    }

    pub fn seed(&self) -> Seed {
        self.seed
    }

    pub fn streams(&self) -> SceneryStreams {
        self.streams
    }

    /// `xi_k`, or `None` outside the window.
    pub fn get(&self, k: i64) -> Option<T> {
        let idx = k.checked_add(self.half_width as i64)?;
        if idx < 0 {
            return None;
        }
        self.values.get(idx as usize).copied()
    }

    /// The sub-window of half-width `k <= K`.
    pub fn restrict(&self, half_width: usize) -> SceneryWindow<T> {
        assert!(half_width <= self.half_width, "restrict cannot grow a window");
        let off = self.half_width - half_width;
        SceneryWindow {
            half_width,
            values: self.values[off..off + 2 * half_width + 1].to_vec(),
            model: Arc::clone(&self.model),
            seed: self.seed,
            streams: self.streams,
        }
    }

    /// The same realization on a wider window; existing values are reproduced
    /// bit for bit.
    pub fn extend(&self, half_width: usize) -> Result<SceneryWindow<T>> {
        if half_width < self.half_width {
            return Err(Error::InvalidModel(format!("cannot extend half-width {} to {}", self.half_width, half_width)));
        }
        generate_with_streams(Arc::clone(&self.model), half_width, self.seed, self.streams)
    }

    /// Writes `k,xi` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "xi"])?;
        for (i, v) in self.values.iter().enumerate() {
            let k = i as i64 - self.half_width as i64;
            w.write_record([k.to_string(), v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Counter-addressed stream over scenery indices in zig-zag order.
struct IndexedStream {
    rng: ChaCha8Rng,
}

impl IndexedStream {
    fn new(seed: Seed, tag: u64) -> Self {
        IndexedStream { rng: seed.child(tag).rng() }
    }

    fn word(&mut self) -> u64 {
        self.rng.next_u64()
    }
}

/// Maps zig-zag position `i` back to the scenery index.
fn zigzag_index(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        (i / 2) as i64
    } else {
        -((i as i64 + 1) / 2)
    }
}

/// Independent randomness sources of a scenery: the torus point (or i.i.d.
/// values) and the auxiliary coins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SceneryStreams {
    pub omega: Seed,
    pub coins: Seed,
}

impl From<Seed> for SceneryStreams {
    fn from(seed: Seed) -> Self {
        SceneryStreams { omega: seed.child(tags::OMEGA), coins: seed.child(tags::COINS) }
    }
}

/// Generates the window of half-width `K` for `(model, seed)`.
pub fn generate<T: Real>(model: &SceneryModel, half_width: usize, seed: Seed) -> Result<SceneryWindow<T>> {
    generate_shared(Arc::new(model.clone()), half_width, seed)
}

pub fn generate_shared<T: Real>(model: Arc<SceneryModel>, half_width: usize, seed: Seed) -> Result<SceneryWindow<T>> {
    generate_with_streams(model, half_width, seed, seed.into())
}

/// Generation with explicit streams; holding `omega` fixed while varying
/// `coins` samples the scenery conditionally on the dynamics.
pub fn generate_with_streams<T: Real>(model: Arc<SceneryModel>, half_width: usize, seed: Seed, streams: SceneryStreams) -> Result<SceneryWindow<T>> {
    if half_width > ORBIT_CAP {
        return Err(Error::WindowTooLarge { requested: half_width, cap: ORBIT_CAP });
    }
    let len = 2 * half_width + 1;
    let mut values = vec![T::zero(); len];
    let slot = |k: i64| (k + half_width as i64) as usize;
    match model.as_ref() {
        SceneryModel::Iid(law) => {
            let mut stream = IndexedStream::new(streams.omega, tags::IID);
            for i in 0..len {
                let k = zigzag_index(i);
                values[slot(k)] = match law {
                    IidLaw::Rademacher => {
                        if stream.word() >> 63 == 1 {
                            T::one()
                        } else {
                            -T::one()
                        }
                    }
                    IidLaw::Gaussian { sd } => {
                        let (a, b) = (stream.word(), stream.word());
                        T::lit(sd * normal_from_words(a, b))
                    }
                };
            }
        }
        SceneryModel::TorusDirect { map, f } => {
            for_each_orbit_point(map, half_width, streams.omega, |k, x| values[slot(k)] = f.eval_fracs(x));
        }
        SceneryModel::TorusCoin { map, f } => {
            let mut fx = vec![0.0f64; len];
            for_each_orbit_point(map, half_width, streams.omega, |k, x| fx[slot(k)] = f.eval_fracs(x));
            let mut stream = IndexedStream::new(streams.coins, tags::COINS);
            for i in 0..len {
                let k = zigzag_index(i);
                let z = open_unit(stream.word());
                values[slot(k)] = if z <= fx[slot(k)] { T::one() } else { -T::one() };
            }
        }
        SceneryModel::TorusMulti { map, thetas, fs } => {
            let p = fs.len();
            let mut cumulative = vec![0.0f64; len * p];
            for_each_orbit_point(map, half_width, streams.omega, |k, x| {
                let base = slot(k) * p;
                let mut acc = 0.0;
                for (j, f) in fs.iter().enumerate() {
                    acc += f.eval_fracs::<f64>(x);
                    cumulative[base + j] = acc;
                }
            });
            let mut stream = IndexedStream::new(streams.coins, tags::COINS);
            for i in 0..len {
                let k = zigzag_index(i);
                let z = open_unit(stream.word());
                let row = &cumulative[slot(k) * p..(slot(k) + 1) * p];
                // first l with z <= F_l; F_p = 1 up to round-off
                let l = row.iter().position(|&c| z <= c).unwrap_or(p - 1);
                values[slot(k)] = T::lit(thetas[l]);
            }
        }
    }
    Ok(SceneryWindow { half_width, values, model, seed, streams })
}

/// Visits `T^k omega` for `k = 0, 1, ..., K` and `k = -1, ..., -K`.
fn for_each_orbit_point<F: FnMut(i64, &[u128])>(map: &TorusMap, half_width: usize, omega_seed: Seed, mut visit: F) {
    let dim = map.dim();
    let omega = TorusPoint::random(dim, &mut omega_seed.rng());
    let mut cur = omega.fracs().to_vec();
    let mut next = vec![0u128; dim];
    visit(0, &cur);
    for k in 1..=half_width as i64 {
        map.forward().apply_into(&cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
        visit(k, &cur);
    }
    cur.copy_from_slice(omega.fracs());
    for k in 1..=half_width as i64 {
        map.backward().apply_into(&cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
        visit(-k, &cur);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::mean_and_se;

    fn half() -> Observable {
        Observable::polynomial(vec![(vec![0, 0], 0.5)]).unwrap()
    }

    fn half_plus_cos() -> Observable {
        Observable::polynomial(vec![(vec![0, 0], 0.5), (vec![1, 0], 0.5)]).unwrap()
    }

    #[test]
    fn rademacher_values() {
        let w: SceneryWindow<f64> = generate(&SceneryModel::rademacher(), 10_000, Seed(1)).unwrap();
        assert_eq!(w.len(), 20_001);
        assert!(w.values().iter().all(|v| v.abs() == 1.0));
        let (m, se) = mean_and_se(w.values());
        assert!(m.abs() < 4.0 * se);
        assert_eq!(w.get(10_001), None);
        assert_eq!(w.get(-10_001), None);
    }

    #[test]
    fn fair_coin_scenery() {
        let model = Arc::new(SceneryModel::torus_coin(TorusMap::cat(), half()).unwrap());
        let pairs: Vec<(f64, f64)> = (0..100_000)
            .map(|r| {
                let w: SceneryWindow<f64> = generate_shared(Arc::clone(&model), 1, Seed(2).replicate(r)).unwrap();
                (w.get(0).unwrap(), w.get(1).unwrap())
            })
            .collect();
        let x0: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let prod: Vec<f64> = pairs.iter().map(|p| p.0 * p.1).collect();
        let (m, se) = mean_and_se(&x0);
        assert!(m.abs() < 4.0 * se);
        let (c, se) = mean_and_se(&prod);
        assert!(c.abs() < 4.0 * se);
    }

    #[test]
    fn two_valued_multi_matches_coin() {
        let f = half_plus_cos();
        let one_minus_f = Observable::affine(1.0, vec![(-1.0, f.clone())]).unwrap();
        let coin = SceneryModel::torus_coin(TorusMap::cat(), f.clone()).unwrap();
        let multi = SceneryModel::torus_multi(TorusMap::cat(), vec![1.0, -1.0], vec![f, one_minus_f]).unwrap();
        for s in 0..20 {
            let a: SceneryWindow<f64> = generate(&coin, 200, Seed(s)).unwrap();
            let b: SceneryWindow<f64> = generate(&multi, 200, Seed(s)).unwrap();
            assert_eq!(a.values(), b.values());
        }
    }

    #[test]
    fn multi_values_are_thetas() {
        let f = half_plus_cos();
        let g = Observable::affine(1.0, vec![(-1.0, f.clone())]).unwrap();
        let m = SceneryModel::torus_multi(TorusMap::cat(), vec![2.0, -2.0], vec![f, g]).unwrap();
        let w: SceneryWindow<f64> = generate(&m, 500, Seed(3)).unwrap();
        assert!(w.values().iter().all(|v| *v == 2.0 || *v == -2.0));
        assert!(w.values().iter().all(|v| v.abs() <= m.sup_bound()));
    }

    #[test]
    fn extend_and_restrict() {
        let models = [
            SceneryModel::rademacher(),
            SceneryModel::gaussian(2.0).unwrap(),
            SceneryModel::torus_direct(TorusMap::cat(), Observable::cos_first(2)).unwrap(),
            SceneryModel::torus_coin(TorusMap::cat(), half_plus_cos()).unwrap(),
        ];
        for m in &models {
            let small: SceneryWindow<f64> = generate(m, 50, Seed(4)).unwrap();
            let big = small.extend(400).unwrap();
            assert_eq!(big.restrict(50), small);
            assert_eq!(big.restrict(50).restrict(50), small);
            assert_eq!(small.extend(50).unwrap(), small);
            for k in -50..=50 {
                assert_eq!(big.get(k), small.get(k));
            }
            assert!(small.extend(10).is_err());
        }
    }

    #[test]
    fn orbit_is_exact() {
        let m = SceneryModel::torus_direct(TorusMap::cat(), Observable::cos_first(2)).unwrap();
        let w: SceneryWindow<f64> = generate(&m, 100, Seed(5)).unwrap();
        let omega = TorusPoint::random(2, &mut SceneryStreams::from(Seed(5)).omega.rng());
        let map = TorusMap::cat();
        for k in [-100i64, -7, 0, 3, 100] {
            let x = map.step(&omega, k);
            assert_eq!(w.get(k).unwrap(), Observable::cos_first(2).eval::<f64>(&x));
        }
    }

    #[test]
    fn conditional_coins_vary() {
        let m = Arc::new(SceneryModel::torus_coin(TorusMap::cat(), half_plus_cos()).unwrap());
        let base = SceneryStreams::from(Seed(6));
        let a: SceneryWindow<f64> = generate_with_streams(Arc::clone(&m), 50, Seed(6), base).unwrap();
        let b: SceneryWindow<f64> = generate_with_streams(Arc::clone(&m), 50, Seed(6), SceneryStreams { coins: Seed(99), ..base }).unwrap();
        assert_ne!(a.values(), b.values());
    }

    #[test]
    fn validation_errors() {
        let cat = TorusMap::cat();
        assert!(matches!(SceneryModel::torus_direct(cat.clone(), half()), Err(Error::InvalidModel(_))));
        let too_big = Observable::polynomial(vec![(vec![0, 0], 0.5), (vec![1, 0], 0.8)]).unwrap();
        assert!(matches!(SceneryModel::torus_coin(cat.clone(), too_big), Err(Error::InvalidModel(_))));
        let not_centered = SceneryModel::torus_multi(cat.clone(), vec![1.0, 0.0], vec![half(), half()]);
        assert!(matches!(not_centered, Err(Error::InvalidModel(_))));
        let not_partition = SceneryModel::torus_multi(cat.clone(), vec![1.0, -1.0], vec![half(), half_plus_cos()]);
        assert!(matches!(not_partition, Err(Error::InvalidModel(_))));
        let wrong_dim = SceneryModel::torus_direct(cat, Observable::cos_first(3));
        assert!(matches!(wrong_dim, Err(Error::InvalidModel(_))));
        assert!(matches!(SceneryModel::gaussian(-1.0), Err(Error::InvalidModel(_))));
        assert!(matches!(generate::<f64>(&SceneryModel::rademacher(), ORBIT_CAP + 1, Seed(0)), Err(Error::WindowTooLarge { .. })));
    }
}
