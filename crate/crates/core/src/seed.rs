//! Hierarchical counter-based seeding.
//!
//! Every random quantity in the crate is addressed by a path of tags below a
//! master seed, e.g. `master / replicate 17 / walk`. Children are derived by
//! hashing, never by drawing from a parent stream, so any replicate can be
//! regenerated in isolation and results do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A node in the seed tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Seed(pub u64);

pub mod tags {
    pub const WALK: u64 = 0x5741_4c4b;
    pub const SCENERY: u64 = 0x5343_454e;
    pub const OMEGA: u64 = 0x4f4d_4547;
    pub const COINS: u64 = 0x5a50_4f53;
    pub const IID: u64 = 0x4949_4450;
    pub const LIMIT_V: u64 = 0x4c49_4d56;
    pub const GAUSS: u64 = 0x4741_5553;
    pub const POINTS: u64 = 0x504f_494e;
    pub const SIMULATE: u64 = 0x5349_4d55;
    pub const LIMIT: u64 = 0x4c49_4d49;
    pub const SIGMA: u64 = 0x5349_474d;
    pub const MOMENTS: u64 = 0x4d4f_4d45;
    pub const CHARCOV: u64 = 0x4348_4152;
    pub const DECAY: u64 = 0x4445_4341;
    pub const SCALING: u64 = 0x5343_414c;
    pub const VALIDATE: u64 = 0x5641_4c49;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Seed {
    pub fn child(self, tag: u64) -> Seed {
        Seed(splitmix64(self.0 ^ splitmix64(tag.wrapping_add(0x632b_e59b_d9b4_e019))))
    }

    /// Seed of replicate `index` below this node.
    pub fn replicate(self, index: usize) -> Seed {
        self.child(0x5245_504c_0000_0000 ^ index as u64)
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

/// Uniform on the open interval (0, 1) from 52 random bits; the half-step
/// offset keeps both endpoints out exactly.
pub fn open_unit(bits: u64) -> f64 {
    ((bits >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

/// Standard normal from two words (Box-Muller, cosine branch). Consumes a
/// fixed number of words so indexed streams stay aligned.
pub fn normal_from_words(a: u64, b: u64) -> f64 {
    let u1 = open_unit(a);
    let u2 = open_unit(b);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
