use serde::{Deserialize, Serialize};

/// Numerical knobs shared by every module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative singular-value threshold for rank decisions.
    pub rank: f64,
    /// Base radius for grouping polynomial roots into multiplicities.
    pub cluster: f64,
    /// Threshold under which a pencil determinant counts as identically zero.
    pub zero_form: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank: 1e-8,
            cluster: 1e-6,
            zero_form: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn with_rank(mut self, rank: f64) -> Self {
        self.rank = rank;
        self
    }

    pub fn with_cluster(mut self, cluster: f64) -> Self {
        self.cluster = cluster;
        self
    }

    pub fn is_valid(&self) -> bool {
        [self.rank, self.cluster, self.zero_form]
            .iter()
            .all(|t| *t > 0.0 && *t < 1.0)
    }
}
