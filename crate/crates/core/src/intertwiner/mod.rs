//! Flip intertwiners as symbolic words.
//!
//! A groupoid word compiles into an ordered list of factors. Each flip
//! contributes its monomial (linear) part followed by its automorphism part
//! `F^ℏ_Λ(x_k, y_k)`, each relabeling its permutation part, and the blocks of
//! consecutive moves appear in reverse order because intertwiners compose
//! contravariantly. The list is in application order: the first factor acts
//! first on a state.
//!
//! Nothing is materialised as a dense operator. The linear parts multiply out
//! exactly; the automorphism parts are evaluated numerically only for words
//! that act on two arcs, through [`local_residual`].

mod compile;
mod consistency;
mod local;
mod relations;
mod rho;

use thiserror::Error;

use crate::opcalc::OpcalcError;
use crate::triangulation::TriangulationError;

pub use compile::{compile, AutoFactor, Factor, IntertwinerWord};
pub use consistency::{
    homomorphism_suite, path_independence_suite, random_flip_word, random_loop, HomomorphismReport,
    LoopPairCheck, PathCheck, PathReport, MAX_RANDOM_FLIPS, SEARCH_DEPTH,
};
pub use local::{local_residual, localize, LocalAuto};
pub use relations::{
    relation_instances, verify_relation_suite, verify_relation_suite_with, RelationCheck,
    RelationInstance, RelationKind, RelationReport, SuiteConfig,
};
pub use rho::{
    eps_is_invariant, loop_inverse, loop_product, research_loop, rho, RepresentationElement,
};

/// Errors raised while compiling or evaluating intertwiner words.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntertwinerError {
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    #[error(transparent)]
    Opcalc(#[from] OpcalcError),
    /// The closing relabeling does not map the end of the word to its start.
    #[error("invalid loop: {0}")]
    InvalidLoop(String),
    /// A word touches arcs outside the local pair it is evaluated on.
    #[error("word does not act on arcs {arcs:?} alone: {reason}")]
    NotLocal { arcs: [usize; 2], reason: String },
    /// The linear part of a word evaluated as a relation is not the identity.
    #[error("linear part is not the identity: {0}")]
    NotClosed(String),
    /// Elements or factors built from different data were combined.
    #[error("mismatch: {0}")]
    Mismatch(String),
}
