use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by every decision in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Structural identities on inputs (`J^2 = I`, `J = J*`).
    pub tau_sym: f64,
    /// Rank decisions, relative to the largest singular value.
    pub tau_rank: f64,
    /// Definiteness and regularity decisions on compressed Gramians.
    pub tau_def: f64,
    /// Residuals of computed identities (relative where a scale exists).
    pub tau_num: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tau_sym: 1e-10,
            tau_rank: 1e-10,
            tau_def: 1e-8,
            tau_num: 1e-9,
        }
    }
}
