//! Desk-scale free entropy dimension machinery.
//!
//! Everything here is finite dimensional: a tracial algebra is a multi-matrix
//! algebra (or the group algebra of a finite group), `L²(M, τ)` is a finite
//! coordinate space and every operator is a matrix. The crate computes the
//! Hilbert–Schmidt commutator spaces of a generating tuple, their von Neumann
//! dimensions over `M ⊗ M^op`, dual operators built from conjugate variables,
//! the spectral cutoff approximation, and the group-theoretic side
//! (regular representations, Reidemeister–Schreier ranks, Betti formulas).

pub mod cocycle;
pub mod cutoff;
pub mod derivation;
pub mod error;
pub mod fixtures;
pub mod fraction;
pub mod group;
pub mod linalg;
pub mod tol;
pub mod tracial;
pub mod vn_dimension;

pub use cocycle::{cocycle_map, compute_h0, compute_h1, compute_h2, delta_report, DeltaReport};
pub use cutoff::{
    apply_cutoff, apply_function, commutator_identity_check, convergence_sweep, CutoffFamily,
    CutoffKind, Polynomial, SpectralFunction, SweepPoint,
};
pub use derivation::{
    antisymmetrize, conjugate_variable, construct_dual_operator, derivation_well_defined, phi_star,
    DerivationSpec, DualOperatorReport, PhiStar, WellDefinedness,
};
pub use error::{Error, Result};
pub use fraction::Fraction;
pub use group::{
    betti_delta_formula, counterexample_report, regular_rep_algebra, schreier_rank, BettiInput,
    BettiProvenance, CounterexampleReport, FiniteGroupTable, FreeWord, Permutation, SchreierGraph,
};
pub use linalg::{CMat, CVec, C64};
pub use tol::Tolerances;
pub use tracial::{generation_check, gns_structure, GenerationCheck, GnsStructure, TracialAlgebra};
pub use vn_dimension::{
    central_decomposition, numerical_span, vn_dimension, BlockMultiplicity, CentralDecomposition,
    HsSubspace, VnDimension,
};
