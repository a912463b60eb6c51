use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("trace weights invalid: {0}")]
    WeightError(String),
    #[error("generator {index} is not self-adjoint (residual {residual:.3e})")]
    NotSelfAdjoint { index: usize, residual: f64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(
        "generators span a {generated}-dimensional subalgebra of a {total}-dimensional algebra"
    )]
    NotGenerating { generated: usize, total: usize },
    #[error("GNS invariant `{check}` violated (residual {residual:.3e})")]
    InvariantViolation { check: &'static str, residual: f64 },
    #[error("could not separate central blocks after {attempts} random central elements")]
    CenterResolutionError { attempts: usize },
    #[error(
        "subspace is not invariant under the commutant bimodule action (residual {residual:.3e})"
    )]
    NotInvariant { residual: f64 },
    #[error("block ({row}, {col}) has complex dimension {complex_dim:.4} which is not a multiple of {unit}")]
    IntegralityError {
        row: usize,
        col: usize,
        complex_dim: f64,
        unit: usize,
    },
    #[error("dim H0 = {dim_h0} exceeds dim H2 = {dim_h2}")]
    ChainViolation { dim_h0: f64, dim_h2: f64 },
    #[error("conjugate variable not defined: derivation defect {defect:.3e}")]
    NotDefined { defect: f64 },
    #[error("dual operator preconditions fail: {0}")]
    IllDefined(String),
    #[error("dual operator residual `{which}` = {residual:.3e} exceeds {threshold:.1e}")]
    ResidualTooLarge {
        which: &'static str,
        residual: f64,
        threshold: f64,
    },
    #[error("group of order {order} exceeds the cap {cap}")]
    TooLarge { order: usize, cap: usize },
    #[error("chosen elements do not generate the group")]
    NotGeneratingSet,
    #[error("invalid group data: {0}")]
    InvalidGroup(String),
    #[error("parse error: {0}")]
    Parse(String),
}
