//! The modular-double pair `Φ^{±iℏ}` as ratios of compact dilogarithms.

use std::f64::consts::PI;

use super::psi::log_psi_logs;
use super::{AccuracyBudget, QdError};
use crate::C64;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// `ln Φ^h(z) = ln ψ^{e^{πih}}(e^z) − ln ψ^{e^{−πi/h}}(e^{z/h})` for `Im h > 0`,
/// where both compact parameters lie inside the unit disc.
pub fn log_phi_ratio(h: C64, z: C64, budget: &AccuracyBudget) -> Result<C64, QdError> {
    if !(h.im > 0.0) {
        return Err(QdError::InvalidParams(format!(
            "ratio formula needs Im h > 0, got h = {h}"
        )));
    }
    Ok(log_psi_logs(I * PI * h, z, budget)? - log_psi_logs(-I * PI / h, z / h, budget)?)
}

fn check_sign_and_hbar(sign: i32, hbar: f64) -> Result<(), QdError> {
    if sign != 1 && sign != -1 {
        return Err(QdError::InvalidParams(format!(
            "sign must be ±1, got {sign}"
        )));
    }
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(QdError::InvalidParams(format!(
            "ℏ must be positive, got {hbar}"
        )));
    }
    Ok(())
}

/// `ln Φ^{±iℏ}(z)`, each sign by its own ratio formula:
///
/// `Φ^{iℏ}(z) = ψ^{e^{−πℏ}}(e^z) / ψ^{e^{−π/ℏ}}(e^{−iz/ℏ})` and
/// `Φ^{−iℏ}(z) = ψ^{e^{−π/ℏ}}(e^{iz/ℏ}) / ψ^{e^{−πℏ}}(e^z)`.
pub fn log_phi_ihbar_with(
    sign: i32,
    hbar: f64,
    z: C64,
    budget: &AccuracyBudget,
) -> Result<C64, QdError> {
    check_sign_and_hbar(sign, hbar)?;
    let lq_small = C64::new(-PI * hbar, 0.0);
    let lq_dual = C64::new(-PI / hbar, 0.0);
    if sign == 1 {
        Ok(log_psi_logs(lq_small, z, budget)? - log_psi_logs(lq_dual, -I * z / hbar, budget)?)
    } else {
        Ok(log_psi_logs(lq_dual, I * z / hbar, budget)? - log_psi_logs(lq_small, z, budget)?)
    }
}

/// `Φ^{±iℏ}(z)`.
pub fn phi_ihbar(sign: i32, hbar: f64, z: C64) -> Result<C64, QdError> {
    log_phi_ihbar_with(sign, hbar, z, &AccuracyBudget::default()).map(C64::exp)
}

/// `Φ^{−iℏ}(z)` through the conjugation identity `1 / conj(Φ^{iℏ}(z̄))`.
pub fn phi_minus_ihbar_by_conjugation(hbar: f64, z: C64) -> Result<C64, QdError> {
    phi_ihbar(1, hbar, z.conj()).map(|v| 1.0 / v.conj())
}
