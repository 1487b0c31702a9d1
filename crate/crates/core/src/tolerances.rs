use serde::{Deserialize, Serialize};

/// Every numerical threshold used by the toolkit, in one place.
///
/// Relative quantities are multiplied by the dimension and/or a norm at the
/// point of use; see the helper methods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Hermiticity check: ‖b − b*‖ ≤ herm · ‖b‖.
    pub herm: f64,
    /// Absolute skew-Hermiticity check for exponentials.
    pub skew: f64,
    /// Decomposition residual factor: residual ≤ recon · n · ‖input‖.
    pub recon: f64,
    /// Rank cutoff relative to the largest singular value.
    pub rank: f64,
    /// Structural residual factor: residual ≤ structure · n.
    pub structure: f64,
    /// Largest number of masa cells for exhaustive projection enumeration.
    pub brute_limit: usize,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        herm: 1e-10,
        skew: 1e-10,
        recon: 1e-11,
        rank: 1e-10,
        structure: 1e-9,
        brute_limit: 12,
    };

    pub fn recon_tol(&self, n: usize, norm: f64) -> f64 {
        self.recon * n.max(1) as f64 * norm
    }

    pub fn struct_tol(&self, n: usize) -> f64 {
        self.structure * n.max(1) as f64
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// The tolerance set every operation uses.
pub const TOL: Tolerances = Tolerances::DEFAULT;
