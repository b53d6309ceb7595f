//! Seeded random streams.
//!
//! Every stochastic routine in this crate draws from an [`RngStream`], a
//! ChaCha8-backed generator that is fully determined by a `u64` seed. Runs
//! with equal seeds are bit-identical across platforms, which the report
//! determinism guarantees depend on.

use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Deterministic random stream identified by its seed.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Seed this stream was created with.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw from `[0, 1)`.
    pub fn uniform01(&mut self) -> f64 {
        self.inner.random()
    }

    /// Uniform draw from `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        debug_assert!(lo < hi, "empty interval");
        lo + (hi - lo) * self.uniform01()
    }

    /// Uniform draw from `[-1, 1)`.
    pub fn uniform_sym(&mut self) -> f64 {
        self.uniform_in(-1.0, 1.0)
    }

    /// Standard normal draw.
    pub fn normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Bernoulli draw with success probability `p` (clamped to `[0, 1]`).
    pub fn chance(&mut self, p: f64) -> bool {
        self.uniform01() < p
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0, "index over empty range");
        self.inner.random_range(0..n)
    }

    /// Vector of `n` uniform `[0, 1)` draws.
    pub fn uniform_vec(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.uniform01()).collect()
    }

    /// Draws a fresh seed for a subordinate stream.
    pub fn next_seed(&mut self) -> u64 {
        rand::RngCore::next_u64(&mut self.inner)
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, v: &mut [T]) {
        for i in (1..v.len()).rev() {
            let j = self.index(i + 1);
            v.swap(i, j);
        }
    }
}

/// Derives a child seed from a base seed and a list of tags (splitmix64
/// steps folded over the tags). Used to give every trial of every
/// (algorithm, benchmark) cell its own independent stream.
pub fn derive_seed(base: u64, tags: &[u64]) -> u64 {
    let mut state = base;
    for &t in tags {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(t);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        state = z ^ (z >> 31);
    }
    state
}
