//! Piecewise Chebyshev table of `ln Φ^ℏ` on the real line.
//!
//! Grid computations need `Φ^ℏ` at millions of real points. The table stores
//! degree-16 Chebyshev interpolants on unit panels covering `[−X, X]` with
//! `X = 36·max(1, ℏ)`. Beyond the table the closed asymptotics are exact to
//! within `e^{−X}` and `e^{−X/ℏ}`: `ln Φ^ℏ(x) → 0` as `x → −∞` and
//! `ln Φ^ℏ(x) → −ix²/(4πℏ) − πi(1+ℏ²)/(12ℏ)` as `x → +∞`.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::barnes::{log_phi_hbar_with, residue_term};
use super::{AccuracyBudget, QdError};
use crate::C64;

const NODES: usize = 17;

/// Chebyshev table of `ln Φ^ℏ(x)` for real `x` and `ℏ > 0`.
#[derive(Clone, Debug)]
pub struct PhiTable {
    hbar: f64,
    x_max: f64,
    panels: Vec<[C64; NODES]>,
}

impl PhiTable {
    /// Builds the table from direct quadrature; panels are computed in
    /// parallel and stored in order.
    pub fn new(hbar: f64) -> Result<Self, QdError> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(QdError::InvalidParams(format!(
                "table needs ℏ > 0, got {hbar}"
            )));
        }
        let x_max = (36.0 * hbar.max(1.0)).ceil();
        let count = 2 * x_max as usize;
        let budget = AccuracyBudget::default();
        let panels = (0..count)
            .into_par_iter()
            .map(|k| {
                let mid = -x_max + k as f64 + 0.5;
                let mut values = [C64::new(0.0, 0.0); NODES];
                for (j, v) in values.iter_mut().enumerate() {
                    let x = mid + 0.5 * node_angle(j).cos();
                    *v = log_phi_hbar_with(hbar, C64::new(x, 0.0), &budget)?;
                }
                Ok(chebyshev_coefficients(&values))
            })
            .collect::<Result<Vec<_>, QdError>>()?;
        Ok(PhiTable {
            hbar,
            x_max,
            panels,
        })
    }

    /// The `ℏ` the table was built for.
    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Half-width `X` of the tabulated interval.
    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// `ln Φ^ℏ(x)`.
    pub fn log_phi(&self, x: f64) -> C64 {
        if x < -self.x_max {
            return C64::new(0.0, 0.0);
        }
        if x >= self.x_max {
            return residue_term(C64::new(self.hbar, 0.0), C64::new(x, 0.0));
        }
        let k = ((x + self.x_max).floor() as usize).min(self.panels.len() - 1);
        let s = 2.0 * (x - (-self.x_max + k as f64 + 0.5));
        clenshaw(&self.panels[k], s)
    }

    /// `Φ^ℏ(x)`.
    pub fn phi(&self, x: f64) -> C64 {
        self.log_phi(x).exp()
    }
}

fn node_angle(j: usize) -> f64 {
    PI * (j as f64 + 0.5) / NODES as f64
}

fn chebyshev_coefficients(values: &[C64; NODES]) -> [C64; NODES] {
    let mut c = [C64::new(0.0, 0.0); NODES];
    for (m, cm) in c.iter_mut().enumerate() {
        let sum: C64 = values
            .iter()
            .enumerate()
            .map(|(j, v)| v * (m as f64 * node_angle(j)).cos())
            .sum();
        *cm = sum * (2.0 / NODES as f64);
    }
    c[0] *= 0.5;
    c
}

fn clenshaw(c: &[C64; NODES], s: f64) -> C64 {
    let (mut b1, mut b2) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    for ck in c.iter().skip(1).rev() {
        let b0 = ck + b1 * (2.0 * s) - b2;
        b2 = b1;
        b1 = b0;
    }
    c[0] + b1 * s - b2
}
