//! The two-variable kernels `F^ℏ_Λ(x, y)` and their tables.

use std::f64::consts::PI;

use serde_json::{json, Value};

use super::barnes::log_phi_hbar_with;
use super::modular::log_phi_ihbar_with;
use super::table::PhiTable;
use super::{AccuracyBudget, Lambda, QDParams, QdError};
use crate::numfmt::{fmt17, json17};
use crate::C64;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// `ln(1 + e^x)` for real `x`.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// `ln F^ℏ_Λ(x, y)` modulo `2πi`.
///
/// * Λ = −1: `Φ^ℏ(x+ℏy) · Φ^{−ℏ}(x−ℏy)`; both arguments are real.
/// * Λ = +1: `Φ^{iℏ}(x+iℏy) · Φ^{−iℏ}(x−iℏy)`, each factor by its own ratio
///   formula.
/// * Λ = 0: `(1+e^x)^{y/(πi)}` with the real logarithm.
pub fn log_f_kernel(params: &QDParams, x: f64, y: f64) -> Result<C64, QdError> {
    let budget = AccuracyBudget::default();
    let h = params.hbar;
    match params.lambda {
        Lambda::Minus => Ok(log_phi_hbar_with(h, C64::new(x + h * y, 0.0), &budget)?
            - log_phi_hbar_with(h, C64::new(x - h * y, 0.0), &budget)?),
        Lambda::Plus => Ok(log_phi_ihbar_with(1, h, C64::new(x, h * y), &budget)?
            + log_phi_ihbar_with(-1, h, C64::new(x, -h * y), &budget)?),
        Lambda::Zero => Ok(-I * (y / PI) * softplus(x)),
    }
}

/// `F^ℏ_Λ(x, y)`.
pub fn f_kernel(params: &QDParams, x: f64, y: f64) -> Result<C64, QdError> {
    log_f_kernel(params, x, y).map(C64::exp)
}

/// `F_−(x, y) = F(x, y)·e^{ixy/π}`, which equals `1/F(−x, −y)`.
///
/// It is the automorphism part of a flip whose c-vector is negative.
pub fn f_minus_kernel(params: &QDParams, x: f64, y: f64) -> Result<C64, QdError> {
    log_f_kernel(params, x, y).map(|l| (l + I * x * y / PI).exp())
}

/// Fast evaluator of `F^ℏ_Λ` for grid work.
///
/// For Λ = −1 it reads `Φ^ℏ` from a [`PhiTable`]. For Λ = +1 it uses the
/// conjugation identity `Φ^{−iℏ}(z̄) = 1/conj(Φ^{iℏ}(z))`, so that
/// `F = exp(2i·Im ln Φ^{iℏ}(x+iℏy))` costs one ratio formula instead of two.
/// Λ = 0 is evaluated directly.
#[derive(Clone, Debug)]
pub struct FKernel {
    params: QDParams,
    table: Option<PhiTable>,
}

impl FKernel {
    /// Prepares the evaluator (builds the table for Λ = −1).
    pub fn new(params: QDParams) -> Result<Self, QdError> {
        let table = match params.lambda {
            Lambda::Minus => Some(PhiTable::new(params.hbar)?),
            _ => None,
        };
        Ok(FKernel { params, table })
    }

    /// The parameters.
    pub fn params(&self) -> &QDParams {
        &self.params
    }

    /// `ln F(x, y)` modulo `2πi`.
    pub fn log_eval(&self, x: f64, y: f64) -> Result<C64, QdError> {
        match &self.table {
            Some(t) => {
                let h = self.params.hbar;
                Ok(t.log_phi(x + h * y) - t.log_phi(x - h * y))
            }
            None if self.params.lambda == Lambda::Plus => {
                let h = self.params.hbar;
                let l = log_phi_ihbar_with(1, h, C64::new(x, h * y), &AccuracyBudget::default())?;
                Ok(C64::new(0.0, 2.0 * l.im))
            }
            None => log_f_kernel(&self.params, x, y),
        }
    }

    /// `F(x, y)` for `sign = +1`, or `F_−(x, y)` for `sign = −1`.
    pub fn eval_signed(&self, sign: i64, x: f64, y: f64) -> Result<C64, QdError> {
        let l = self.log_eval(x, y)?;
        Ok(if sign < 0 {
            (l + I * x * y / PI).exp()
        } else {
            l.exp()
        })
    }
}

/// One sample of a kernel table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FSample {
    pub x: f64,
    pub y: f64,
    pub value: C64,
}

/// `F` on the tensor grid `xs × ys`, x-major.
pub fn f_table(params: &QDParams, xs: &[f64], ys: &[f64]) -> Result<Vec<FSample>, QdError> {
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for &x in xs {
        for &y in ys {
            out.push(FSample {
                x,
                y,
                value: f_kernel(params, x, y)?,
            });
        }
    }
    Ok(out)
}

/// CSV with header `x,y,re,im,abs`, floats at 17 significant digits.
pub fn f_table_csv(samples: &[FSample]) -> String {
    let mut s = String::from("x,y,re,im,abs\n");
    for p in samples {
        let cols = [p.x, p.y, p.value.re, p.value.im, p.value.norm()].map(fmt17);
        s.push_str(&cols.join(","));
        s.push('\n');
    }
    s
}

/// `{"lambda":Λ,"hbar":ℏ,"samples":[{"x":…,"y":…,"re":…,"im":…,"abs":…},…]}`.
pub fn f_table_json(params: &QDParams, samples: &[FSample]) -> Value {
    let rows: Vec<Value> = samples
        .iter()
        .map(|p| {
            json!({"x": json17(p.x), "y": json17(p.y), "re": json17(p.value.re), "im": json17(p.value.im), "abs": json17(p.value.norm())})
        })
        .collect();
    json!({"lambda": params.lambda.as_i64(), "hbar": json17(params.hbar), "samples": rows})
}
