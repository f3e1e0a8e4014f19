//! Crate-wide error type.

use thiserror::Error;

use crate::heisenberg::HeisenbergError;
use crate::intertwiner::IntertwinerError;
use crate::opcalc::OpcalcError;
use crate::qdilog::QdError;
use crate::triangulation::TriangulationError;

/// Any error raised by this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    #[error(transparent)]
    Qdilog(#[from] QdError),
    #[error(transparent)]
    Heisenberg(#[from] HeisenbergError),
    #[error(transparent)]
    Opcalc(#[from] OpcalcError),
    #[error(transparent)]
    Intertwiner(#[from] IntertwinerError),
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Triangulation(_) => "triangulation",
            Error::Qdilog(_) => "qdilog",
            Error::Heisenberg(_) => "heisenberg",
            Error::Opcalc(_) => "opcalc",
            Error::Intertwiner(_) => "intertwiner",
        }
    }
}
