//! Seeded generation of the random channel matrices.
//!
//! One network draw holds a channel matrix `H[(i,k), j]` of shape N x M
//! for every user `(i, k)` (cell `i`, in-cell index `k`) and every base
//! station `j`, direct links included. Entries are i.i.d. complex Gaussian
//! with unit variance, the standard generic-channel model: every fixed
//! polynomial in the entries is nonzero with probability one, so rank
//! properties hold generically.
//!
//! Generation is deterministic: a fixed stream cipher RNG seeded from the
//! 64-bit seed, matrices filled in lexicographic `(i, k, j)` order,
//! entries in row-major order. Identical seeds reproduce identical draws
//! bit-exactly, independent of platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::SystemConfig;
use crate::linalg::{random_gaussian, CMat};

/// One deterministic draw of all G*K*G channel matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    pub config: SystemConfig,
    pub seed: u64,
    mats: Vec<CMat>,
}

/// Draws every channel matrix for `cfg` from `seed`.
pub fn gen_channels(cfg: &SystemConfig, seed: u64) -> ChannelSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (g, k) = (cfg.g as usize, cfg.k as usize);
    let (m, n) = (cfg.m as usize, cfg.n as usize);
    let mut mats = Vec::with_capacity(g * k * g);
    for _cell in 0..g {
        for _user in 0..k {
            for _bs in 0..g {
                mats.push(random_gaussian(n, m, &mut rng));
            }
        }
    }
    ChannelSet { config: *cfg, seed, mats }
}

impl ChannelSet {
    /// The N x M matrix from base station `bs` to user `user` of cell
    /// `cell` (all indices zero-based).
    pub fn channel(&self, cell: usize, user: usize, bs: usize) -> &CMat {
        let (g, k) = (self.config.g as usize, self.config.k as usize);
        assert!(cell < g && user < k && bs < g, "channel index out of range");
        &self.mats[(cell * k + user) * g + bs]
    }

    /// All matrices with their `(cell, user, bs)` labels, in generation
    /// order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize, usize), &CMat)> {
        let (g, k) = (self.config.g as usize, self.config.k as usize);
        self.mats.iter().enumerate().map(move |(idx, m)| {
            let bs = idx % g;
            let user = (idx / g) % k;
            let cell = idx / (g * k);
            ((cell, user, bs), m)
        })
    }
}
