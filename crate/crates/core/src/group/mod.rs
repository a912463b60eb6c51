//! Group-theoretic side: finite group algebras, Reidemeister–Schreier ranks of
//! kernels in free groups, the L²-Betti formula for δ and the semicontinuity
//! counterexample.

mod betti;
mod counterexample;
mod regular;
mod schreier;
mod table;

pub use betti::{betti_delta_formula, BettiInput, BettiProvenance};
pub use counterexample::{
    counterexample_report, CounterexampleReport, NormBound, SequenceVariable,
};
pub use regular::{regular_rep_algebra, regular_rep_algebra_with, DEFAULT_ORDER_CAP};
pub use schreier::{schreier_rank, FreeWord, SchreierGraph};
pub use table::{FiniteGroupTable, Permutation};
