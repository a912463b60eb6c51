//! Default numerical thresholds.

/// Absolute residual for operator identities.
pub const OPERATOR: f64 = 1e-10;
/// Absolute residual for scalar identities.
pub const SCALAR: f64 = 1e-12;
/// Relative singular value cutoff for numerical rank.
pub const RANK: f64 = 1e-9;
/// Least-squares defect separating "derivation descends" from "relations obstruct".
pub const WELL_DEFINED: f64 = 1e-8;
/// Maximum distance from a subspace to its image under the commutant action.
pub const INVARIANCE: f64 = 1e-8;
/// Residual threshold for the dual operator report.
pub const RESIDUAL: f64 = 1e-9;
/// Slack when rounding block dimensions to multiples of `n_i n_j`.
pub const INTEGRALITY_SLACK: f64 = 0.1;
/// Comparison tolerance for reported dimensions.
pub const DIMENSION: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub residual: f64,
    pub rank: f64,
    pub well_defined: f64,
    pub invariance: f64,
    pub dimension: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual: RESIDUAL,
            rank: RANK,
            well_defined: WELL_DEFINED,
            invariance: INVARIANCE,
            dimension: DIMENSION,
        }
    }
}
