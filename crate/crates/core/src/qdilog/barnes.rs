//! The non-compact quantum dilogarithm by Barnes contour quadrature,
//!
//! `Φ^h(z) = exp(−¼ ∫_Ω e^{−ipz} / (sinh(πp) sinh(πhp)) dp/p)`,
//!
//! where Ω runs along the real line and passes above the origin.
//!
//! The working contour is a horizontal line `Im p = ±c`. For `Re z ≤ 0` the
//! line above the origin is homotopic to Ω and the integrand decays like
//! `e^{c·Re z}`. For `Re z > 0` the line below the origin is used instead and
//! the residue at `p = 0` is added back:
//! `−iz²/(4πh) − πi(1+h²)/(12h)`. On a line the integrand is analytic in a
//! strip of half-width `c` around it, so the trapezoidal rule converges
//! geometrically in the node spacing.

use std::f64::consts::{LN_2, PI};

use super::cmath::{abs1pexp, log1pexp};
use super::{AccuracyBudget, QdError};
use crate::C64;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Decay exponent at which the contour is truncated (`e^{−40}`).
const TRUNCATION_EXPONENT: f64 = 40.0;

/// Direct quadrature is used while `|Im z|` stays this far inside the strip.
const STRIP_MARGIN: f64 = 0.3;

/// `ln sinh(w)` modulo `2πi`, without overflow.
fn ln_sinh(w: C64) -> C64 {
    if w.re < 0.0 {
        return ln_sinh(-w) + I * PI;
    }
    w - LN_2 + (1.0 - (-2.0 * w).exp()).ln()
}

/// The Barnes integrand `e^{−ipz} / (p sinh(πp) sinh(πhp))`.
pub fn barnes_integrand(h: C64, z: C64, p: C64) -> C64 {
    (-I * p * z - ln_sinh(PI * p) - ln_sinh(PI * h * p)).exp() / p
}

/// The residue correction `−iz²/(4πh) − πi(1+h²)/(12h)`, which is also the
/// large-`Re z` asymptotic of `ln Φ^h(z)`.
pub fn residue_term(h: C64, z: C64) -> C64 {
    -I * z * z / (4.0 * PI * h) - I * PI * (1.0 + h * h) / (12.0 * h)
}

/// Half the distance from the real axis to the first pole off the origin.
fn line_height(h: C64) -> f64 {
    0.5 * (h.re / h.norm_sqr()).min(1.0)
}

/// Half-width of the strip in which the integral converges.
pub fn strip_half_width(h: C64) -> f64 {
    PI * (1.0 + h.re)
}

/// `ln Φ^h(z)` by direct line quadrature. Requires `Re h > 0` and
/// `|Im z| < π(1 + Re h) − 0.3`.
pub fn log_phi_direct(h: C64, z: C64, budget: &AccuracyBudget) -> Result<C64, QdError> {
    if !(h.re > 0.0) {
        return Err(QdError::InvalidParams(format!(
            "Barnes quadrature needs Re h > 0, got h = {h}"
        )));
    }
    let decay = strip_half_width(h) - z.im.abs();
    if decay < STRIP_MARGIN {
        return Err(QdError::QuadratureFailure(format!(
            "Im z = {} is outside the strip |Im z| < {}",
            z.im,
            strip_half_width(h) - STRIP_MARGIN
        )));
    }
    let c = line_height(h);
    let du = match budget.quadrature.nodes_per_unit {
        Some(n) => 1.0 / n,
        None => (c / 5.0).min(2.0 * PI / (z.re.abs() + 80.0)),
    };
    let umax = budget
        .quadrature
        .truncation_radius
        .unwrap_or(TRUNCATION_EXPONENT / decay);
    let n = (umax / du).ceil() as i64;
    let side = if z.re <= 0.0 { 1.0 } else { -1.0 };
    let (mut fine, mut coarse) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    for j in -n..=n {
        let g = barnes_integrand(h, z, C64::new(j as f64 * du, side * c));
        fine += g;
        if j % 2 == 0 {
            coarse += g;
        }
    }
    let (fine, coarse) = (fine * du, coarse * 2.0 * du);
    // The nearest singularity is the pole at distance c from the line, so the
    // trapezoidal error decays like e^{−2πc/du}. Doubling the step multiplies
    // it by e^{πc/du}, which turns the fine-coarse gap into an estimate.
    let estimate = 0.25 * (fine - coarse).norm() * (-PI * c / du).exp();
    if !(estimate <= budget.quadrature.error_budget) {
        return Err(QdError::QuadratureFailure(format!(
            "error estimate {estimate:e} at z = {z}, h = {h}"
        )));
    }
    let mut value = -0.25 * fine;
    if side < 0.0 {
        value += residue_term(h, z);
    }
    Ok(value)
}

/// `ln Φ^h(z)` for `Re h > 0` and any `z`.
///
/// Outside the quadrature strip the value is continued with steps of `2πih`
/// using `Φ^h(z + 2πih) = (1 + e^{πih} e^z) Φ^h(z)` until
/// `|Im z| ≤ π Re h`.
pub fn log_phi_h(h: C64, z: C64, budget: &AccuracyBudget) -> Result<C64, QdError> {
    if !(h.re > 0.0) {
        return Err(QdError::InvalidParams(format!(
            "Barnes quadrature needs Re h > 0, got h = {h}"
        )));
    }
    if z.im.abs() < strip_half_width(h) - STRIP_MARGIN {
        return log_phi_direct(h, z, budget);
    }
    let step = 2.0 * PI * I * h;
    let shift = I * PI * h;
    let target = PI * h.re;
    let mut w = z;
    let mut acc = C64::new(0.0, 0.0);
    let check = |a: C64| {
        if abs1pexp(a) < 1e-12 {
            Err(QdError::PoleOfContinuation(format!(
                "continuation factor vanishes at z = {z}"
            )))
        } else {
            Ok(log1pexp(a))
        }
    };
    while w.im > target {
        w -= step;
        acc += check(shift + w)?;
    }
    while w.im < -target {
        acc -= check(shift + w)?;
        w += step;
    }
    Ok(log_phi_direct(h, w, budget)? + acc)
}

/// `ln Φ^ℏ(z)` for real nonzero `ℏ`; negative `ℏ` uses `Φ^{−ℏ} = 1/Φ^ℏ`.
pub fn log_phi_hbar(hbar: f64, z: C64) -> Result<C64, QdError> {
    log_phi_hbar_with(hbar, z, &AccuracyBudget::default())
}

/// [`log_phi_hbar`] with an explicit budget.
pub fn log_phi_hbar_with(hbar: f64, z: C64, budget: &AccuracyBudget) -> Result<C64, QdError> {
    if !hbar.is_finite() || hbar == 0.0 {
        return Err(QdError::InvalidParams(format!(
            "ℏ must be finite and nonzero, got {hbar}"
        )));
    }
    if hbar < 0.0 {
        return log_phi_hbar_with(-hbar, z, budget).map(|l| -l);
    }
    log_phi_h(C64::new(hbar, 0.0), z, budget)
}

/// `Φ^ℏ(z)`.
pub fn phi_hbar(hbar: f64, z: C64) -> Result<C64, QdError> {
    log_phi_hbar(hbar, z).map(C64::exp)
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub(crate) fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// `ln Φ^ℏ(z)` on the literal contour: the real line with a semicircle of
/// radius `r` above the origin, by composite Gauss–Legendre quadrature.
///
/// This is an independent cross-check of [`log_phi_direct`]. Its integrand
/// grows like `e^{r·Re z}` on the semicircle, so it is meant for moderate
/// `|z|`. Requires `0 < r < min(1, 1/ℏ)`.
pub fn log_phi_semicircle(hbar: f64, z: C64, r: f64) -> Result<C64, QdError> {
    if !(hbar > 0.0) {
        return Err(QdError::InvalidParams(format!(
            "ℏ must be positive, got {hbar}"
        )));
    }
    if !(r > 0.0 && r < 1f64.min(1.0 / hbar)) {
        return Err(QdError::InvalidParams(format!(
            "semicircle radius {r} is not inside (0, min(1, 1/ℏ))"
        )));
    }
    let h = C64::new(hbar, 0.0);
    let decay = strip_half_width(h) - z.im.abs();
    if decay < STRIP_MARGIN {
        return Err(QdError::QuadratureFailure(format!(
            "Im z = {} is outside the strip",
            z.im
        )));
    }
    let umax = TRUNCATION_EXPONENT / decay;
    let rule = gauss_legendre(20);
    let panel = 0.25f64.min(1.0 / (z.re.abs() + 1.0));
    let segment = |a: f64, b: f64| {
        let panels = ((b - a) / panel).ceil() as usize;
        let w = (b - a) / panels as f64;
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..panels {
            let mid = a + (k as f64 + 0.5) * w;
            for &(x, wt) in &rule {
                acc += barnes_integrand(h, z, C64::new(mid + 0.5 * w * x, 0.0)) * (0.5 * w * wt);
            }
        }
        acc
    };
    let mut total = segment(-umax, -r) + segment(r, umax);
    // Semicircle p = r e^{iθ}, θ from π down to 0.
    let arcs = 8;
    for k in 0..arcs {
        let (t0, t1) = (
            PI * k as f64 / arcs as f64,
            PI * (k + 1) as f64 / arcs as f64,
        );
        for &(x, wt) in &rule {
            let theta = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * x;
            let p = r * C64::from_polar(1.0, theta);
            total -= barnes_integrand(h, z, p) * I * p * (0.5 * (t1 - t0) * wt);
        }
    }
    Ok(-0.25 * total)
}
