//! Exact first-order operators and the Heisenberg solutions attached to an
//! exchange matrix.
//!
//! An operator `Σ_j a_j s_j + Σ_j b_j (−πi ∂/∂s_j) + c·πi` on functions of
//! real variables `s_j` is stored as the triple `(a, b, c)` of exact scalars.
//! The unit πi is formal and never evaluated, so every relation below is an
//! equality of rationals.

mod coeffs;
mod solution;
mod symplectic;

use thiserror::Error;

pub use coeffs::{check_weyl_consistency, commutator, CommutatorForm, OperatorCoeffs};
pub use solution::{
    echelon_reduce, irreducible_solution, reducible_solution, ConstraintReport, EchelonData,
    HeisenbergSolution,
};
pub use symplectic::{monomial_map, permutation_map, tropical_monomial_map, LinearSymplecticMap};

/// Errors raised by the exact operator layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeisenbergError {
    #[error("valence matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("arc {arc} out of range for {count} arcs")]
    ArcOutOfRange { arc: usize, count: usize },
}
