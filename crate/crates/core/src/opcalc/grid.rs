//! Uniform periodic grids on `[−L, L)^d` and sampled states.
//!
//! Discrete Fourier convention: the forward transform along an axis is the
//! unnormalised DFT `ĝ_k = Σ_j g_j e^{−2πijk/N}` and the inverse carries the
//! factor `1/N`. Mode `k` (in FFT order, `k' = k` for `k < N/2` and `k − N`
//! otherwise) is the plane wave `e^{iκt}` with `κ = πk'/L`, so `−i∂` acts on
//! it by `κ` and `x = −πi∂` by `πκ`.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::OpcalcError;
use crate::C64;

/// Fraction of the half-width beyond which mass counts as boundary mass.
pub const BOUNDARY_FRACTION: f64 = 0.9;

/// A `d`-dimensional grid with `N` points per axis on `[−L, L)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub l: f64,
}

impl Grid {
    /// Validates `d ∈ {1, 2}`, `N ≥ 64` a power of two and `L > 0`.
    pub fn new(d: usize, n: usize, l: f64) -> Result<Self, OpcalcError> {
        if d != 1 && d != 2 {
            return Err(OpcalcError::InvalidGrid(format!(
                "dimension must be 1 or 2, got {d}"
            )));
        }
        if n < 64 || !n.is_power_of_two() {
            return Err(OpcalcError::InvalidGrid(format!(
                "N must be a power of two ≥ 64, got {n}"
            )));
        }
        if !(l > 0.0 && l.is_finite()) {
            return Err(OpcalcError::InvalidGrid(format!(
                "L must be positive, got {l}"
            )));
        }
        Ok(Grid { d, n, l })
    }

    /// Number of samples `N^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    /// Always false for a validated grid.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cell size `2L/N`.
    pub fn dx(&self) -> f64 {
        2.0 * self.l / self.n as f64
    }

    /// Cell volume `(2L/N)^d`.
    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(self.d as i32)
    }

    /// Axis positions `t_j = −L + j·dx`.
    pub fn positions(&self) -> Vec<f64> {
        (0..self.n)
            .map(|j| -self.l + j as f64 * self.dx())
            .collect()
    }

    /// Axis momenta `κ_k = πk'/L` in FFT order.
    pub fn momenta(&self) -> Vec<f64> {
        let n = self.n as i64;
        (0..n)
            .map(|k| PI * (if k < n / 2 { k } else { k - n }) as f64 / self.l)
            .collect()
    }

    /// Largest representable momentum `πN/(2L)`.
    pub fn momentum_max(&self) -> f64 {
        PI * self.n as f64 / (2.0 * self.l)
    }

    /// Splits a flat index into per-axis indices (axis 0 is the slow one).
    pub fn unravel(&self, idx: usize) -> [usize; 2] {
        if self.d == 1 {
            [idx, 0]
        } else {
            [idx / self.n, idx % self.n]
        }
    }
}

/// The index `j'` with `t_{j'} = −t_j` (modulo the period).
pub(crate) fn mirror(n: usize, j: usize) -> usize {
    (n - j) % n
}

/// A sampled state on a grid, stored row-major with axis 0 slowest.
#[derive(Clone, Debug, PartialEq)]
pub struct GridState {
    pub grid: Grid,
    pub values: Vec<C64>,
}

/// A Gaussian test state `Π_a exp(−(t_a−c_a)²/(2w_a²) + i k_a t_a)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianState {
    pub center: Vec<f64>,
    pub width: Vec<f64>,
    pub boost: Vec<f64>,
}

impl GaussianState {
    /// A one-dimensional Gaussian.
    pub fn new_1d(width: f64, center: f64, boost: f64) -> Self {
        GaussianState {
            center: vec![center],
            width: vec![width],
            boost: vec![boost],
        }
    }

    /// A product Gaussian in two dimensions.
    pub fn new_2d(width: [f64; 2], center: [f64; 2], boost: [f64; 2]) -> Self {
        GaussianState {
            center: center.to_vec(),
            width: width.to_vec(),
            boost: boost.to_vec(),
        }
    }

    /// Number of axes.
    pub fn dim(&self) -> usize {
        self.center.len()
    }
}

impl GridState {
    /// Wraps sample values, checking the length.
    pub fn new(grid: Grid, values: Vec<C64>) -> Result<Self, OpcalcError> {
        if values.len() != grid.len() {
            return Err(OpcalcError::DimensionMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        Ok(GridState { grid, values })
    }

    /// Samples `f` at every grid point; `f` receives the `d` coordinates.
    pub fn from_fn(grid: Grid, f: impl Fn(&[f64]) -> C64 + Sync) -> Self {
        let t = grid.positions();
        let values = (0..grid.len())
            .into_par_iter()
            .map(|idx| {
                let [i, j] = grid.unravel(idx);
                if grid.d == 1 {
                    f(&[t[i]])
                } else {
                    f(&[t[i], t[j]])
                }
            })
            .collect();
        GridState { grid, values }
    }

    /// Samples a Gaussian test state.
    pub fn gaussian(grid: Grid, g: &GaussianState) -> Result<Self, OpcalcError> {
        if g.dim() != grid.d || g.width.len() != grid.d || g.boost.len() != grid.d {
            return Err(OpcalcError::DimensionMismatch {
                expected: grid.d,
                found: g.dim(),
            });
        }
        if g.width.iter().any(|w| !(*w > 0.0)) {
            return Err(OpcalcError::InvalidGrid(
                "Gaussian widths must be positive".into(),
            ));
        }
        Ok(GridState::from_fn(grid, |t| {
            let mut e = C64::new(0.0, 0.0);
            for a in 0..t.len() {
                let s = (t[a] - g.center[a]) / g.width[a];
                e += C64::new(-0.5 * s * s, g.boost[a] * t[a]);
            }
            e.exp()
        }))
    }

    /// `‖ψ‖ = (Σ|ψ_j|²·(2L/N)^d)^{1/2}`.
    pub fn norm(&self) -> f64 {
        (sum_sq(&self.values) * self.grid.cell_volume()).sqrt()
    }

    /// `‖self − other‖`.
    pub fn distance(&self, other: &GridState) -> f64 {
        let s: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        (s * self.grid.cell_volume()).sqrt()
    }

    /// Fraction of `‖ψ‖²` at points with `|t_a| > 0.9·L` on some axis.
    pub fn boundary_mass(&self) -> f64 {
        let t = self.grid.positions();
        let edge = BOUNDARY_FRACTION * self.grid.l;
        let outer: f64 = self
            .values
            .iter()
            .enumerate()
            .filter(|(idx, _)| {
                let ij = self.grid.unravel(*idx);
                ij[..self.grid.d].iter().any(|&i| t[i].abs() > edge)
            })
            .map(|(_, v)| v.norm_sqr())
            .sum();
        ratio(outer, sum_sq(&self.values))
    }

    /// Fraction of `‖ψ‖²` in Fourier modes with `|κ_a| > 0.9·κ_max` on some
    /// axis.
    pub fn spectral_tail(&self) -> f64 {
        let mut spectrum = self.values.clone();
        let fft = Transforms::new(self.grid.n);
        for axis in 0..self.grid.d {
            fft.axis(&mut spectrum, self.grid.d, axis, false);
        }
        let kappa = self.grid.momenta();
        let edge = BOUNDARY_FRACTION * self.grid.momentum_max();
        let outer: f64 = spectrum
            .iter()
            .enumerate()
            .filter(|(idx, _)| {
                let ij = self.grid.unravel(*idx);
                ij[..self.grid.d].iter().any(|&k| kappa[k].abs() > edge)
            })
            .map(|(_, v)| v.norm_sqr())
            .sum();
        ratio(outer, sum_sq(&spectrum))
    }
}

fn sum_sq(v: &[C64]) -> f64 {
    v.iter().map(C64::norm_sqr).sum()
}

fn ratio(a: f64, b: f64) -> f64 {
    if b > 0.0 {
        a / b
    } else {
        0.0
    }
}

/// Forward and inverse one-dimensional FFTs of a fixed length.
pub(crate) struct Transforms {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Transforms {
    pub(crate) fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Transforms {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    /// Transforms every line along `axis` in place. The inverse includes the
    /// `1/N` normalisation.
    pub(crate) fn axis(&self, values: &mut [C64], d: usize, axis: usize, inverse: bool) {
        let n = self.n;
        if d == 2 && axis == 0 {
            transpose(values, n);
            self.rows(values, inverse);
            transpose(values, n);
        } else {
            self.rows(values, inverse);
        }
        if inverse {
            let s = 1.0 / n as f64;
            values.par_iter_mut().for_each(|v| *v *= s);
        }
    }

    fn rows(&self, values: &mut [C64], inverse: bool) {
        let fft = if inverse {
            &self.inverse
        } else {
            &self.forward
        };
        let scratch_len = fft.get_inplace_scratch_len();
        values.par_chunks_mut(self.n).for_each_init(
            || vec![C64::new(0.0, 0.0); scratch_len],
            |scratch, row| fft.process_with_scratch(row, scratch),
        );
    }
}

/// In-place transpose of an `n × n` row-major block.
fn transpose(values: &mut [C64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            values.swap(i * n + j, j * n + i);
        }
    }
}
