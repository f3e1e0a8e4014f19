//! Functional calculus on sampled `L²(ℝ^d)`, `d ∈ {1, 2}`.
//!
//! States are sampled on periodic grids; operators are immutable
//! [`GridOperatorPlan`]s built from pointwise multipliers, Fourier
//! multipliers, chirp conjugations and shear resamplings. Functions of a
//! commuting pair `(x_k, y_k)` of first-order operators are applied by
//! simultaneous diagonalisation, and the pentagon identities of `Φ^ℏ` and
//! `F^ℏ_Λ` are checked on Gaussian test states.

mod grid;
mod ops;
mod pentagon;

pub(crate) use pentagon::residuals;
mod plan;

use thiserror::Error;

use crate::qdilog::QdError;

pub use grid::{GaussianState, Grid, GridState, BOUNDARY_FRACTION};
pub use ops::{apply_F, apply_F_with, apply_weyl, plan_f, SUPPORT_TOLERANCE};
pub use pentagon::{
    default_f_states, default_phi_states, pentagon_operators, phi_pentagon_chirp, refinement_csv,
    refinement_ladder, verify_F_pentagon, verify_F_pentagon_with, verify_phi_pentagon,
    verify_phi_pentagon_with, ResidualReport, StateResidual, PENTAGON_TOLERANCE,
    TEST_STATE_BOUNDARY_TOLERANCE,
};
pub use plan::{rotation_plan, GridOperatorPlan, RESAMPLING_BUDGET};

/// Errors raised by grid operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum OpcalcError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("support overflow: {0}")]
    SupportOverflow(String),
    #[error("alias risk: {0}")]
    AliasRisk(String),
    #[error("operators do not commute: {0}")]
    NonCommuting(String),
    #[error("unsupported operator shape: {0}")]
    UnsupportedShape(String),
    #[error("rotation resampling error: {0}")]
    RotationResampling(String),
    #[error(transparent)]
    Kernel(#[from] QdError),
}
