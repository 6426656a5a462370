use serde::{Deserialize, Serialize};

/// Numerical thresholds used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Slack on eigenvalue bounds (PSD tests, `A <= I`, trace bounds).
    pub eigenvalue: f64,
    /// Slack on exact dot-product identities.
    pub dot: f64,
    /// Rank threshold, relative to the largest singular value.
    pub svd_rank: f64,
    /// Max entrywise deviation of `M - M^dagger` accepted as Hermitian.
    pub hermitian: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        eigenvalue: 1e-9,
        dot: 1e-12,
        svd_rank: 1e-8,
        hermitian: 1e-12,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
