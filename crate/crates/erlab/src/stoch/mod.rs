//! Stochastic machinery: reproducible RNG streams, fractional Brownian
//! sampling, exit-time Monte Carlo and random walks on the gasket.

pub mod crossing;
pub mod exit;
pub mod fbm;
pub mod srw;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Seed plus stream id selecting a reproducible random source.
///
/// Parallel tasks (Monte Carlo paths) draw from per-task streams derived with
/// [`RngSpec::task_rng`], so results are independent of scheduling order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngSpec {
    pub seed: u64,
    pub stream: u64,
}

impl RngSpec {
    pub fn new(seed: u64) -> Self {
        RngSpec { seed, stream: 0 }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        RngSpec {
            seed: self.seed,
            stream,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream << 32);
        rng
    }

    /// RNG of subtask `task` (< 2^32) within this stream.
    pub fn task_rng(&self, task: u64) -> ChaCha8Rng {
        debug_assert!(task < 1 << 32);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream((self.stream << 32) | task);
        rng
    }
}

/// A sampled path on the uniform grid `t_k = k · dt`.
#[derive(Debug, Clone)]
pub struct PathSample {
    pub dt: f64,
    pub values: Vec<f64>,
    /// Hurst exponent the path was generated with, when applicable.
    pub hurst: Option<f64>,
}

impl PathSample {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn horizon(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.dt
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }
}
