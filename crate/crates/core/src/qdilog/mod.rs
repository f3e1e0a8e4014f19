//! Quantum dilogarithms: the compact `ψ^q`, the non-compact `Φ^ℏ`, the
//! modular-double pair `Φ^{±iℏ}` and the kernels `F^ℏ_Λ`.
//!
//! Values are produced as logarithms where possible; callers exponentiate.
//! Logarithms are only meaningful modulo `2πi`.

mod barnes;
mod cmath;
mod kernel;
mod modular;
mod psi;
mod table;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use barnes::{
    barnes_integrand, log_phi_direct, log_phi_h, log_phi_hbar, log_phi_hbar_with,
    log_phi_semicircle, phi_hbar, residue_term, strip_half_width,
};
pub use kernel::{
    f_kernel, f_minus_kernel, f_table, f_table_csv, f_table_json, log_f_kernel, FKernel, FSample,
};
pub use modular::{log_phi_ihbar_with, log_phi_ratio, phi_ihbar, phi_minus_ihbar_by_conjugation};
pub use psi::{log_psi_q, psi_q, psi_q_with};
pub use table::PhiTable;

/// Errors raised by the special-function evaluators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QdError {
    #[error("pole hit: {0}")]
    PoleHit(String),
    #[error("not convergent: {0}")]
    NonConvergent(String),
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),
    #[error("continuation hits a pole: {0}")]
    PoleOfContinuation(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// The sign of the cosmological constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub enum Lambda {
    Minus,
    Zero,
    Plus,
}

impl Lambda {
    /// `−1`, `0` or `1`.
    pub fn as_i64(self) -> i64 {
        match self {
            Lambda::Minus => -1,
            Lambda::Zero => 0,
            Lambda::Plus => 1,
        }
    }
}

impl TryFrom<i64> for Lambda {
    type Error = QdError;
    fn try_from(v: i64) -> Result<Self, QdError> {
        match v {
            -1 => Ok(Lambda::Minus),
            0 => Ok(Lambda::Zero),
            1 => Ok(Lambda::Plus),
            _ => Err(QdError::InvalidParams(format!(
                "Λ must be -1, 0 or 1, got {v}"
            ))),
        }
    }
}

impl From<Lambda> for i64 {
    fn from(l: Lambda) -> i64 {
        l.as_i64()
    }
}

/// Kernel parameters `(Λ, ℏ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QDParams {
    pub lambda: Lambda,
    pub hbar: f64,
}

impl QDParams {
    /// Validates `ℏ > 0`.
    pub fn new(lambda: Lambda, hbar: f64) -> Result<Self, QdError> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(QdError::InvalidParams(format!(
                "ℏ must be positive, got {hbar}"
            )));
        }
        Ok(QDParams { lambda, hbar })
    }
}

/// Quadrature controls; `None` selects the automatic choice.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureSpec {
    /// Trapezoidal nodes per unit length on the line contour.
    pub nodes_per_unit: Option<f64>,
    /// Half-length of the truncated line contour.
    pub truncation_radius: Option<f64>,
    /// Semicircle radius of the cross-check contour.
    pub semicircle_radius: Option<f64>,
    /// Largest accepted quadrature error estimate.
    pub error_budget: f64,
}

/// Accuracy controls shared by the evaluators.
#[derive(Clone, Debug, PartialEq)]
pub struct AccuracyBudget {
    /// Tail bound for truncated products.
    pub abs_tol: f64,
    /// Maximum number of product factors.
    pub max_terms: usize,
    pub quadrature: QuadratureSpec,
}

impl Default for AccuracyBudget {
    fn default() -> Self {
        AccuracyBudget {
            abs_tol: 1e-15,
            max_terms: 100_000,
            quadrature: QuadratureSpec {
                nodes_per_unit: None,
                truncation_radius: None,
                semicircle_radius: None,
                error_budget: 1e-10,
            },
        }
    }
}

impl AccuracyBudget {
    /// Default semicircle radius `(π/4)·min(1, 1/ℏ)`.
    pub fn default_semicircle_radius(hbar: f64) -> f64 {
        0.25 * PI * 1f64.min(1.0 / hbar)
    }

    /// Checks the tolerance floor and, for a given `ℏ`, that the semicircle
    /// stays below the first pole off the origin, at distance `min(1, 1/ℏ)`.
    pub fn validate(&self, hbar: Option<f64>) -> Result<(), QdError> {
        if !(self.abs_tol >= 4.0 * f64::EPSILON) {
            return Err(QdError::InvalidParams(format!(
                "abs_tol {} is below the floor {}",
                self.abs_tol,
                4.0 * f64::EPSILON
            )));
        }
        if self.max_terms == 0 {
            return Err(QdError::InvalidParams("max_terms must be positive".into()));
        }
        if let (Some(r), Some(h)) = (self.quadrature.semicircle_radius, hbar) {
            if !(r > 0.0 && r < 1f64.min(1.0 / h)) {
                return Err(QdError::InvalidParams(format!(
                    "semicircle radius {r} must lie in (0, {})",
                    1f64.min(1.0 / h)
                )));
            }
        }
        Ok(())
    }
}
