//! The compact quantum dilogarithm `ψ^q(z) = ∏_{m≥0} (1 + q^{2m+1} z)^{−1}`.

use super::cmath::{abs1pexp, log1pexp};
use super::{AccuracyBudget, QdError};
use crate::C64;

/// A factor `1 + q^{2m+1} z` smaller than this in modulus is a pole hit.
const POLE_FLOOR: f64 = 1e-12;

/// `ln ψ^q(z)`, summed in log space, modulo `2πi`.
///
/// The product is truncated once the tail bound
/// `Σ_{m>M} |u_m| / (1 − |u_m|) ≤ |u_{M+1}| / ((1 − |q|²)(1 − |u_{M+1}|))`
/// with `u_m = q^{2m+1} z` drops below `abs_tol`.
pub fn log_psi_q(q: C64, z: C64, budget: &AccuracyBudget) -> Result<C64, QdError> {
    let aq = q.norm();
    if !aq.is_finite() || aq >= 1.0 {
        return Err(QdError::NonConvergent(format!("|q| = {aq} is not below 1")));
    }
    if aq == 0.0 || z == C64::new(0.0, 0.0) {
        return Ok(C64::new(0.0, 0.0));
    }
    log_psi_logs(q.ln(), z.ln(), budget)
}

/// `ln ψ^q(z)` from `ln q` and `ln z`, so that `z = e^w` may be far outside
/// the floating-point range.
pub(crate) fn log_psi_logs(lq: C64, lz: C64, budget: &AccuracyBudget) -> Result<C64, QdError> {
    let aq = lq.re.exp();
    if aq >= 1.0 - 1e-12 {
        return Err(QdError::NonConvergent(format!(
            "|q| = {aq} is too close to 1"
        )));
    }
    let geometric = 1.0 - aq * aq;
    let mut sum = C64::new(0.0, 0.0);
    for m in 0..budget.max_terms {
        let a = lq * (2 * m + 1) as f64 + lz;
        if a.re < 0.0 {
            let u = a.re.exp();
            if u / (geometric * (1.0 - u)) <= budget.abs_tol {
                return Ok(sum);
            }
        }
        if abs1pexp(a) < POLE_FLOOR {
            return Err(QdError::PoleHit(format!(
                "factor m = {m} of ψ^q vanishes at ln z = {lz}"
            )));
        }
        sum -= log1pexp(a);
    }
    Err(QdError::NonConvergent(format!(
        "ψ^q tail above {} after {} factors",
        budget.abs_tol, budget.max_terms
    )))
}

/// `ψ^q(z)` with the given budget.
pub fn psi_q_with(q: C64, z: C64, budget: &AccuracyBudget) -> Result<C64, QdError> {
    log_psi_q(q, z, budget).map(C64::exp)
}

/// `ψ^q(z)` with the default budget.
pub fn psi_q(q: C64, z: C64) -> Result<C64, QdError> {
    psi_q_with(q, z, &AccuracyBudget::default())
}
