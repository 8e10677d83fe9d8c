//! Simple symmetric random walk, occupation counts and the scenery functional.

use crate::error::{Error, Result};
use crate::real::{ExactSum, Real};
use crate::scenery::SceneryWindow;
use crate::seed::Seed;
use rand::RngCore;
use std::io::Write;

/// Positions `S_1, ..., S_n` of a walk started at `S_0 = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkPath {
    positions: Vec<i64>,
    seed: Option<Seed>,
}

/// Generates `n` fair `+-1` steps, 64 per random word, low bit first.
pub(crate) fn for_each_step<F: FnMut(i64)>(n: usize, seed: Seed, mut f: F) {
    let mut rng = seed.rng();
    let mut left = n;
    while left > 0 {
        let word = rng.next_u64();
        let take = left.min(64);
        for b in 0..take {
            f(if (word >> b) & 1 == 1 { 1 } else { -1 });
        }
        left -= take;
    }
}

pub fn sample_walk(n: usize, seed: Seed) -> Result<WalkPath> {
    if n == 0 {
        return Err(Error::InvalidArgument("walk length must be at least 1".into()));
    }
    let mut positions = Vec::with_capacity(n);
    let mut s = 0i64;
    for_each_step(n, seed, |d| {
        s += d;
        positions.push(s);
    });
    Ok(WalkPath { positions, seed: Some(seed) })
}

impl WalkPath {
    /// Builds a path from explicit `+-1` steps.
    pub fn from_steps(steps: &[i64]) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidArgument("walk length must be at least 1".into()));
        }
        let mut s = 0;
        let mut positions = Vec::with_capacity(steps.len());
        for &d in steps {
            if d != 1 && d != -1 {
                return Err(Error::InvalidArgument(format!("step {d} is not +-1")));
            }
            s += d;
            positions.push(s);
        }
        Ok(WalkPath { positions, seed: None })
    }

    pub fn n(&self) -> usize {
        self.positions.len()
    }

    /// `S_1, ..., S_n`.
    pub fn positions(&self) -> &[i64] {
        &self.positions
    }

    pub fn seed(&self) -> Option<Seed> {
        self.seed
    }

    /// Writes `j,S_j` rows including `j = 0`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["j", "S_j"])?;
        w.write_record(["0", "0"])?;
        for (j, s) in self.positions.iter().enumerate() {
            w.write_record([(j + 1).to_string(), s.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn max_excursion(path: &WalkPath) -> u64 {
    path.positions.iter().map(|s| s.unsigned_abs()).max().unwrap_or(0)
}

/// Visit counts `N_n(k) = #{1 <= j <= n : S_j = k}` on `[k_min, k_max]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupationProfile {
    n: usize,
    k_min: i64,
    counts: Vec<u64>,
}

impl OccupationProfile {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_min(&self) -> i64 {
        self.k_min
    }

    pub fn k_max(&self) -> i64 {
        self.k_min + self.counts.len() as i64 - 1
    }

    /// Counts for `k_min..=k_max`.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn get(&self, k: i64) -> u64 {
        let i = k - self.k_min;
        if i < 0 {
            return 0;
        }
        self.counts.get(i as usize).copied().unwrap_or(0)
    }

    /// `(k, N(k))` pairs in ascending `k`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.counts.iter().enumerate().map(move |(i, &c)| (self.k_min + i as i64, c))
    }

    /// `max(|k_min|, |k_max|)`, the smallest window half-width that covers the walk.
    pub fn excursion(&self) -> u64 {
        self.k_min.unsigned_abs().max(self.k_max().unsigned_abs())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "N"])?;
        for (k, c) in self.iter() {
            w.write_record([k.to_string(), c.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn occupation(path: &WalkPath) -> OccupationProfile {
    let lo = *path.positions.iter().min().expect("nonempty path");
    let hi = *path.positions.iter().max().expect("nonempty path");
    let mut counts = vec![0u64; (hi - lo + 1) as usize];
    for &s in &path.positions {
        counts[(s - lo) as usize] += 1;
    }
    OccupationProfile { n: path.n(), k_min: lo, counts }
}

/// Reusable buffer for computing occupation profiles without materializing
/// the path. Produces exactly `occupation(&sample_walk(n, seed))`.
#[derive(Debug, Default)]
pub struct OccupationScratch {
    buf: Vec<u64>,
}

impl OccupationScratch {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn profile(&mut self, n: usize, seed: Seed) -> Result<OccupationProfile> {
        if n == 0 {
            return Err(Error::InvalidArgument("walk length must be at least 1".into()));
        }
        if self.buf.len() < 2 * n + 1 {
            self.buf = vec![0; 2 * n + 1];
        }
        let origin = n as i64;
        let buf = &mut self.buf;
        let (mut s, mut lo, mut hi) = (0i64, i64::MAX, i64::MIN);
        for_each_step(n, seed, |d| {
            s += d;
            buf[(s + origin) as usize] += 1;
            lo = lo.min(s);
            hi = hi.max(s);
        });
        let range = (lo + origin) as usize..=(hi + origin) as usize;
        let counts = buf[range.clone()].to_vec();
        buf[range].fill(0);
        Ok(OccupationProfile { n, k_min: lo, counts })
    }
}

/// `sum_k N(k)^2` and its `n^{-3/2}` scaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfIntersection {
    pub raw: u128,
    pub scaled: f64,
}

pub fn self_intersection(profile: &OccupationProfile) -> SelfIntersection {
    let raw: u128 = profile.counts.iter().map(|&c| c as u128 * c as u128).sum();
    let scaled = raw as f64 / (profile.n as f64).powf(1.5);
    SelfIntersection { raw, scaled }
}

/// Value of `Z_n = sum_{j<=n} xi_{S_j}` and `Z_n / n^{3/4}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalSample<T = f64> {
    pub n: usize,
    pub sum: T,
    pub normalized: T,
    pub model_id: String,
    pub scenery_seed: Seed,
    pub walk_seed: Option<Seed>,
}

/// What to do when the walk leaves the scenery window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WindowPolicy {
    #[default]
    AutoExtend,
    Error,
}

pub fn normalize<T: Real>(sum: T, n: usize) -> T {
    sum / T::from_usize_lossy(n).powf(T::lit(0.75))
}

/// `sum_j xi_{S_j}` summed along the path.
pub fn sum_along_path<T: Real>(window: &SceneryWindow<T>, path: &WalkPath) -> Result<T> {
    let mut acc = ExactSum::new();
    for &s in path.positions() {
        let v = window.get(s).ok_or(Error::WindowTooSmall { half_width: window.half_width(), needed: s.unsigned_abs() as usize })?;
        acc.add(v);
    }
    Ok(acc.value())
}

/// `sum_k xi_k N(k)`, ascending in `k`.
pub fn sum_by_occupation<T: Real>(window: &SceneryWindow<T>, profile: &OccupationProfile) -> Result<T> {
    let needed = profile.excursion() as usize;
    if needed > window.half_width() {
        return Err(Error::WindowTooSmall { half_width: window.half_width(), needed });
    }
    let mut acc = ExactSum::new();
    for (k, c) in profile.iter() {
        if c > 0 {
            acc.add_product(window.get(k).expect("covered"), T::from_u64(c).expect("count representable"));
        }
    }
    Ok(acc.value())
}

/// Both routes are correctly rounded values of the same real number, hence
/// they agree bit for bit.
pub fn evaluate_functional<T: Real>(window: &SceneryWindow<T>, path: &WalkPath, policy: WindowPolicy) -> Result<FunctionalSample<T>> {
    let profile = occupation(path);
    let needed = profile.excursion() as usize;
    let extended;
    let window = if needed > window.half_width() {
        match policy {
            WindowPolicy::Error => return Err(Error::WindowTooSmall { half_width: window.half_width(), needed }),
            WindowPolicy::AutoExtend => {
                extended = window.extend(needed)?;
                &extended
            }
        }
    } else {
        window
    };
    let direct = sum_along_path(window, path)?;
    let via_counts = sum_by_occupation(window, &profile)?;
    assert!(direct == via_counts || (direct.is_nan() && via_counts.is_nan()), "occupation identity violated: {direct} vs {via_counts}");
    Ok(FunctionalSample {
        n: path.n(),
        sum: direct,
        normalized: normalize(direct, path.n()),
        model_id: window.model_id(),
        scenery_seed: window.seed(),
        walk_seed: path.seed(),
    })
}
