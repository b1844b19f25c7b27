//! Global tolerance and determinism settings.
//!
//! Every membership test, root solve, and iteration budget in the crate is
//! driven by one [`Config`] record so that a run is reproducible from its
//! serialized output alone.

use serde::{Deserialize, Serialize};

/// Tolerances and determinism knobs shared by all modules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Config {
    /// Membership/equality tolerance for geometric predicates.
    pub epsilon: f64,
    /// Residual tolerance for polynomial and fiber solvers.
    pub root_tol: f64,
    /// Default iteration budget for orbit classification.
    pub max_iter: usize,
    /// Seed for every randomized sampler (chaos game, residual sampling).
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            epsilon: 1e-9,
            root_tol: 1e-8,
            max_iter: 64,
            seed: 1,
        }
    }
}

impl Config {
    /// Seed override from the environment, used by the CLI.
    pub fn with_env_seed(mut self) -> Self {
        if let Ok(s) = std::env::var("CORRMATE_SEED") {
            if let Ok(seed) = s.parse::<u64>() {
                self.seed = seed;
            }
        }
        self
    }
}
