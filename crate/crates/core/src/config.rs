use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Budgets for brute-force checks and sampling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    /// Largest carrier that may be enumerated.
    pub enumeration_bound: u64,
    /// Largest number of element pairs checked exhaustively; beyond it pair
    /// properties are sampled.
    pub pair_budget: u64,
    /// Sample count for properties that cannot be checked exhaustively.
    pub samples: usize,
    /// How many leading terms of a non-compactness witness are verified.
    pub witness_prefix: usize,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            enumeration_bound: 1_000_000,
            pair_budget: 1 << 16,
            samples: 500,
            witness_prefix: 64,
            seed: 0,
        }
    }
}

impl Config {
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}
