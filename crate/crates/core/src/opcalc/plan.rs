//! Immutable recipes for unitary operators on sampled states.

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use rayon::prelude::*;

use super::grid::{mirror, Grid, GridState, Transforms, BOUNDARY_FRACTION};
use super::OpcalcError;
use crate::C64;

/// Largest accepted resampling error estimate of one shear, as a relative
/// amplitude: the square root of the mass fraction that wraps around the
/// period or sits in the Nyquist band.
pub const RESAMPLING_BUDGET: f64 = 1e-3;

/// A unitary operator on `L²` of a grid, as a recipe.
#[derive(Clone, Debug)]
pub enum GridOperatorPlan {
    /// Pointwise multiplication on the position lattice.
    Multiplier(Arc<Vec<C64>>),
    /// Fourier transform along `axes`, pointwise multiplication, transform
    /// back. Axes not listed stay in position space, so `values` lives on the
    /// mixed lattice.
    FourierMultiplier {
        axes: Vec<usize>,
        values: Arc<Vec<C64>>,
    },
    /// `e^{ic|t|²} ∘ inner ∘ e^{−ic|t|²}`.
    ChirpConjugated {
        exponent: f64,
        inner: Box<GridOperatorPlan>,
    },
    /// `g(t) = f(t + factor·t_other·e_axis)`, done as a Fourier phase along
    /// `axis`.
    Shear {
        axis: usize,
        other: usize,
        factor: f64,
    },
    /// `g(p) = f(R^q p)` with `R` the rotation by a quarter turn; an exact
    /// index permutation.
    QuarterTurn(u8),
    /// Applies the parts in order.
    Composite(Vec<GridOperatorPlan>),
}

impl GridOperatorPlan {
    /// The identity.
    pub fn identity() -> Self {
        GridOperatorPlan::Composite(Vec::new())
    }

    /// Variant name for reports.
    pub fn kind_name(&self) -> &'static str {
        match self {
            GridOperatorPlan::Multiplier(_) => "Multiplier",
            GridOperatorPlan::FourierMultiplier { .. } => "FourierMultiplier",
            GridOperatorPlan::ChirpConjugated { .. } => "ChirpConjugated",
            GridOperatorPlan::Shear { .. } => "Shear",
            GridOperatorPlan::QuarterTurn(_) => "QuarterTurn",
            GridOperatorPlan::Composite(_) => "Composite",
        }
    }

    /// `self` followed by `next`.
    pub fn then(self, next: GridOperatorPlan) -> Self {
        match self {
            GridOperatorPlan::Composite(mut parts) => {
                parts.push(next);
                GridOperatorPlan::Composite(parts)
            }
            first => GridOperatorPlan::Composite(vec![first, next]),
        }
    }

    /// The inverse recipe.
    pub fn inverse(&self) -> Self {
        let conj = |v: &Arc<Vec<C64>>| Arc::new(v.iter().map(|z| 1.0 / z).collect::<Vec<_>>());
        match self {
            GridOperatorPlan::Multiplier(v) => GridOperatorPlan::Multiplier(conj(v)),
            GridOperatorPlan::FourierMultiplier { axes, values } => {
                GridOperatorPlan::FourierMultiplier {
                    axes: axes.clone(),
                    values: conj(values),
                }
            }
            GridOperatorPlan::ChirpConjugated { exponent, inner } => {
                GridOperatorPlan::ChirpConjugated {
                    exponent: *exponent,
                    inner: Box::new(inner.inverse()),
                }
            }
            GridOperatorPlan::Shear {
                axis,
                other,
                factor,
            } => GridOperatorPlan::Shear {
                axis: *axis,
                other: *other,
                factor: -factor,
            },
            GridOperatorPlan::QuarterTurn(q) => GridOperatorPlan::QuarterTurn((4 - q % 4) % 4),
            GridOperatorPlan::Composite(parts) => GridOperatorPlan::Composite(
                parts.iter().rev().map(GridOperatorPlan::inverse).collect(),
            ),
        }
    }

    /// Applies the plan; the input is left unchanged.
    pub fn apply(&self, psi: &GridState) -> Result<GridState, OpcalcError> {
        self.apply_tracked(psi, RESAMPLING_BUDGET)
            .map(|(out, _)| out)
    }

    /// Applies the plan with an explicit resampling budget and returns the
    /// largest resampling error estimate met along the way (0 without
    /// shears).
    pub fn apply_tracked(
        &self,
        psi: &GridState,
        budget: f64,
    ) -> Result<(GridState, f64), OpcalcError> {
        let mut values = psi.values.clone();
        let fft = Transforms::new(psi.grid.n);
        let estimate = self.apply_in_place(&psi.grid, &mut values, &fft, budget)?;
        Ok((
            GridState {
                grid: psi.grid,
                values,
            },
            estimate,
        ))
    }

    fn apply_in_place(
        &self,
        grid: &Grid,
        values: &mut [C64],
        fft: &Transforms,
        budget: f64,
    ) -> Result<f64, OpcalcError> {
        if values.len() != grid.len() {
            return Err(OpcalcError::DimensionMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        let mut estimate = 0.0f64;
        match self {
            GridOperatorPlan::Multiplier(m) => {
                check_len(grid, m.len())?;
                values
                    .par_iter_mut()
                    .zip(m.par_iter())
                    .for_each(|(v, m)| *v *= m);
            }
            GridOperatorPlan::FourierMultiplier { axes, values: m } => {
                check_len(grid, m.len())?;
                check_axes(grid, axes)?;
                for &a in axes {
                    fft.axis(values, grid.d, a, false);
                }
                values
                    .par_iter_mut()
                    .zip(m.par_iter())
                    .for_each(|(v, m)| *v *= m);
                for &a in axes {
                    fft.axis(values, grid.d, a, true);
                }
            }
            GridOperatorPlan::ChirpConjugated { exponent, inner } => {
                chirp(grid, values, -exponent);
                estimate = inner.apply_in_place(grid, values, fft, budget)?;
                chirp(grid, values, *exponent);
            }
            GridOperatorPlan::Shear {
                axis,
                other,
                factor,
            } => {
                estimate = shear(grid, values, fft, *axis, *other, *factor, budget)?;
            }
            GridOperatorPlan::QuarterTurn(q) => {
                if grid.d != 2 {
                    return Err(OpcalcError::InvalidGrid(
                        "quarter turns need a two-dimensional grid".into(),
                    ));
                }
                for _ in 0..(q % 4) {
                    quarter_turn(grid.n, values);
                }
            }
            GridOperatorPlan::Composite(parts) => {
                for p in parts {
                    estimate = estimate.max(p.apply_in_place(grid, values, fft, budget)?);
                }
            }
        }
        Ok(estimate)
    }
}

fn check_len(grid: &Grid, len: usize) -> Result<(), OpcalcError> {
    if len != grid.len() {
        return Err(OpcalcError::DimensionMismatch {
            expected: grid.len(),
            found: len,
        });
    }
    Ok(())
}

fn check_axes(grid: &Grid, axes: &[usize]) -> Result<(), OpcalcError> {
    let mut seen = [false; 2];
    for &a in axes {
        if a >= grid.d || seen[a] {
            return Err(OpcalcError::InvalidGrid(format!(
                "bad axis list {axes:?} for d = {}",
                grid.d
            )));
        }
        seen[a] = true;
    }
    Ok(())
}

/// Multiplies by `e^{ic|t|²}`.
fn chirp(grid: &Grid, values: &mut [C64], c: f64) {
    let t = grid.positions();
    let g = *grid;
    values.par_iter_mut().enumerate().for_each(|(idx, v)| {
        let [i, j] = g.unravel(idx);
        let r2 = if g.d == 1 {
            t[i] * t[i]
        } else {
            t[i] * t[i] + t[j] * t[j]
        };
        *v *= C64::from_polar(1.0, c * r2);
    });
}

/// `g(t) = f(t + s·t_other·e_axis)`, refusing when the shift would wrap mass
/// around the period or when the line spectra reach the Nyquist band.
fn shear(
    grid: &Grid,
    values: &mut [C64],
    fft: &Transforms,
    axis: usize,
    other: usize,
    s: f64,
    budget: f64,
) -> Result<f64, OpcalcError> {
    if grid.d != 2 || axis > 1 || other > 1 || axis == other {
        return Err(OpcalcError::InvalidGrid(format!(
            "shear of axis {axis} along {other} needs two distinct axes of a 2d grid"
        )));
    }
    let n = grid.n;
    let t = grid.positions();
    // Sample f(p) lands at p_axis − s·p_other; beyond ±L it wraps around.
    let (mut total, mut wrapped) = (0.0, 0.0);
    for (idx, v) in values.iter().enumerate() {
        let ij = grid.unravel(idx);
        let w = v.norm_sqr();
        total += w;
        if (t[ij[axis]] - s * t[ij[other]]).abs() > grid.l {
            wrapped += w;
        }
    }
    fft.axis(values, 2, axis, false);
    let kappa = grid.momenta();
    let kedge = BOUNDARY_FRACTION * grid.momentum_max();
    let (mut spec_total, mut spec_tail) = (0.0, 0.0);
    for (idx, v) in values.iter().enumerate() {
        let w = v.norm_sqr();
        spec_total += w;
        if kappa[grid.unravel(idx)[axis]].abs() > kedge {
            spec_tail += w;
        }
    }
    let estimate = (frac(wrapped, total) + frac(spec_tail, spec_total)).sqrt();
    if !(estimate <= budget) {
        return Err(OpcalcError::RotationResampling(format!(
            "shear of axis {axis} by {s} has resampling error estimate {estimate:e}"
        )));
    }
    values.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        for (j, v) in row.iter_mut().enumerate() {
            let (k, o) = if axis == 1 { (j, i) } else { (i, j) };
            *v *= C64::from_polar(1.0, kappa[k] * s * t[o]);
        }
    });
    fft.axis(values, 2, axis, true);
    Ok(estimate)
}

fn frac(a: f64, b: f64) -> f64 {
    if b > 0.0 {
        a / b
    } else {
        0.0
    }
}

/// `g(p₁, p₂) = f(−p₂, p₁)`.
fn quarter_turn(n: usize, values: &mut [C64]) {
    let src = values.to_vec();
    values.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        for (j, v) in row.iter_mut().enumerate() {
            *v = src[mirror(n, j) * n + i];
        }
    });
}

/// Resampling by a rotation: `(R_θ f)(p) = f(Rot_θ p)` on a 2d grid.
///
/// The angle is split into quarter turns, which are exact permutations, and
/// a remainder `r ∈ [−π/4, π/4]`. The remainder uses the three-shear
/// factorisation `Rot_r = Sh₁(−tan(r/2))·Sh₂(sin r)·Sh₁(−tan(r/2))`, each shear
/// being a Fourier phase, so band-limited periodic data are rotated exactly.
/// `R_α R_β = R_{α+β}`.
pub fn rotation_plan(grid: &Grid, theta: f64) -> Result<GridOperatorPlan, OpcalcError> {
    if grid.d != 2 {
        return Err(OpcalcError::InvalidGrid(
            "rotations need a two-dimensional grid".into(),
        ));
    }
    if !theta.is_finite() {
        return Err(OpcalcError::InvalidGrid(format!(
            "rotation angle {theta} is not finite"
        )));
    }
    let q = (theta / FRAC_PI_2).round();
    let r = theta - q * FRAC_PI_2;
    let mut parts = Vec::new();
    let turns = q.rem_euclid(4.0) as u8;
    if turns != 0 {
        parts.push(GridOperatorPlan::QuarterTurn(turns));
    }
    if r.abs() > 1e-15 {
        let a = -(0.5 * r).tan();
        let b = r.sin();
        parts.push(GridOperatorPlan::Shear {
            axis: 0,
            other: 1,
            factor: a,
        });
        parts.push(GridOperatorPlan::Shear {
            axis: 1,
            other: 0,
            factor: b,
        });
        parts.push(GridOperatorPlan::Shear {
            axis: 0,
            other: 1,
            factor: a,
        });
    }
    Ok(GridOperatorPlan::Composite(parts))
}
