//! Labeled ideal triangulations of punctured surfaces.
//!
//! A triangulation of a closed oriented surface of genus `g` with `n`
//! punctures has `6g − 6 + 3n` arcs and `4g − 4 + 2n` triangles. Because
//! self-folded triangles are excluded, every arc borders two *distinct*
//! triangles, so the triangulation is completely determined by listing each
//! triangle as the counterclockwise triple of its arc labels: the gluing pairs
//! up the two occurrences of every label. This triple list, with each triple
//! rotated to start at its smallest label and the list sorted, is the
//! canonical form used for equality.
//!
//! Arcs are 0-based (`0..arc_count`) in the API. The JSON formats and the
//! command-line front end use 1-based labels.

mod frame;
mod isomorphism;
mod json;
mod path;
mod permutation;
mod surface;
mod word;

pub use frame::{mutate_extended, Frame};
pub use isomorphism::{automorphisms, find_isomorphism, isomorphisms};
pub use json::{cycles_to_one_based, TriangulationFile, WordFile};
pub use path::{find_path, find_path_framed};
pub use permutation::Permutation;
pub use surface::{
    build_triangulation, exchange_matrix, flip, mutate_exchange, permute, ExchangeMatrix,
    LabeledTriangulation, Slot, SurfaceSignature,
};
pub use word::{verify_loop, GroupoidWord, MappingClassLoop, Move};

use thiserror::Error;

/// Errors raised by triangulation constructors and moves.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangulationError {
    /// The Euler characteristic `2 − 2g − n` is not negative, or `n = 0`.
    #[error("surface (genus {genus}, punctures {punctures}) does not have negative Euler characteristic")]
    BadSignature { genus: usize, punctures: usize },
    /// Two sides of one triangle lie on the same arc.
    #[error("triangle {triangle} is self-folded: two of its sides lie on arc {arc}")]
    SelfFoldedTriangle { triangle: usize, arc: usize },
    /// The gluing is not a fixed-point-free involution on side slots.
    #[error("bad gluing: {0}")]
    BadGluing(String),
    /// The number of gluing orbits differs from `6g − 6 + 3n`.
    #[error("wrong arc count: expected {expected}, found {found}")]
    WrongArcCount { expected: usize, found: usize },
    /// The number of corner cycles differs from the number of punctures.
    #[error("Euler count mismatch: {corner_cycles} corner cycles for {punctures} punctures")]
    EulerMismatch {
        corner_cycles: usize,
        punctures: usize,
    },
    /// Arc labels are not a bijection onto `0..arc_count`.
    #[error("bad arc labels: {0}")]
    BadLabels(String),
    /// The flip at `arc` would create a self-folded triangle.
    #[error("illegal flip at arc {arc}: {reason}")]
    IllegalFlip { arc: usize, reason: String },
    /// An arc index is out of range.
    #[error("arc {arc} out of range for a surface with {count} arcs")]
    ArcOutOfRange { arc: usize, count: usize },
    /// A permutation is not a bijection of the right size.
    #[error("invalid permutation: {0}")]
    BadPermutation(String),
    /// Breadth-first search exhausted its radius.
    #[error("no connecting word within depth {radius}")]
    NotFound { radius: usize },
    /// Two triangulations live on different surfaces.
    #[error("signature mismatch: {0:?} vs {1:?}")]
    SignatureMismatch(SurfaceSignature, SurfaceSignature),
    /// Malformed serialized input.
    #[error("malformed input: {0}")]
    Format(String),
}
