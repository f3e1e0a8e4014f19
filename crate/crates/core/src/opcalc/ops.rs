//! Weyl operators and the two-variable functional calculus on grids.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;

use super::grid::{Grid, GridState};
use super::plan::{rotation_plan, GridOperatorPlan};
use super::OpcalcError;
use crate::exact::ExactScalar;
use crate::heisenberg::{check_weyl_consistency, commutator, OperatorCoeffs};
use crate::qdilog::{FKernel, QDParams};
use crate::C64;

/// Boundary mass above which [`apply_weyl`] refuses its input or output.
pub const SUPPORT_TOLERANCE: f64 = 1e-6;

fn check_dim<T>(grid: &Grid, a: &OperatorCoeffs<T>) -> Result<(), OpcalcError> {
    if a.pos.len() != grid.d || a.mom.len() != grid.d {
        return Err(OpcalcError::DimensionMismatch {
            expected: grid.d,
            found: a.pos.len().max(a.mom.len()),
        });
    }
    Ok(())
}

fn check_support(psi: &GridState, what: &str) -> Result<(), OpcalcError> {
    let m = psi.boundary_mass();
    if m > SUPPORT_TOLERANCE {
        return Err(OpcalcError::SupportOverflow(format!(
            "{what} has boundary mass {m:e}"
        )));
    }
    Ok(())
}

/// `e^{iαA}ψ` for `A = a·t + b·x + s` with `x_j = −πi∂_j`.
///
/// The momentum part is the Fourier multiplier `e^{iαπ b·κ}`, a translation
/// by `απb`; the position part is the phase `e^{iα(a·t + s)}`. Splitting the
/// exponential costs the Baker–Campbell–Hausdorff factor `e^{iα²c/2}` with
/// `c = πq`, `q = check_weyl_consistency(a·t, b·x)`.
pub fn apply_weyl<T: ExactScalar>(
    a: &OperatorCoeffs<T>,
    alpha: f64,
    psi: &GridState,
) -> Result<GridState, OpcalcError> {
    let grid = psi.grid;
    check_dim(&grid, a)?;
    if alpha == 0.0 {
        return Ok(psi.clone());
    }
    check_support(psi, "input state")?;
    let (pos, mom) = a.to_f64();
    let scalar = a.scalar.to_f64();
    for j in 0..grid.d {
        if (alpha * PI * mom[j]).abs() > 0.5 * grid.l {
            return Err(OpcalcError::AliasRisk(format!(
                "translation {} on axis {j} exceeds L/2",
                alpha * PI * mom[j]
            )));
        }
        if (alpha * pos[j]).abs() > 0.5 * grid.momentum_max() {
            return Err(OpcalcError::AliasRisk(format!(
                "momentum kick {} on axis {j} exceeds κ_max/2",
                alpha * pos[j]
            )));
        }
    }
    let q = check_weyl_consistency(
        &OperatorCoeffs::from_pos(a.pos.clone()),
        &OperatorCoeffs::from_mom(a.mom.clone()),
    );
    let bch = 0.5 * alpha * alpha * PI * q.to_f64();
    let t = grid.positions();
    let kappa = grid.momenta();
    let translation = GridOperatorPlan::FourierMultiplier {
        axes: (0..grid.d).collect(),
        values: Arc::new(lattice(&grid, |i, j| {
            let mut phase = mom[0] * kappa[i];
            if grid.d == 2 {
                phase += mom[1] * kappa[j];
            }
            C64::from_polar(1.0, alpha * PI * phase)
        })),
    };
    let kick = GridOperatorPlan::Multiplier(Arc::new(lattice(&grid, |i, j| {
        let mut phase = pos[0] * t[i] + scalar;
        if grid.d == 2 {
            phase += pos[1] * t[j];
        }
        C64::from_polar(1.0, alpha * phase + bch)
    })));
    let out = translation.then(kick).apply(psi)?;
    check_support(&out, "output state")?;
    Ok(out)
}

/// Evaluates `f(i, j)` on every lattice index pair in parallel.
fn lattice(grid: &Grid, f: impl Fn(usize, usize) -> C64 + Sync) -> Vec<C64> {
    let g = *grid;
    (0..g.len())
        .into_par_iter()
        .map(|idx| {
            let [i, j] = g.unravel(idx);
            f(i, j)
        })
        .collect()
}

fn try_lattice(
    grid: &Grid,
    f: impl Fn(usize, usize) -> Result<C64, OpcalcError> + Sync,
) -> Result<Vec<C64>, OpcalcError> {
    let g = *grid;
    (0..g.len())
        .into_par_iter()
        .map(|idx| {
            let [i, j] = g.unravel(idx);
            f(i, j)
        })
        .collect()
}

/// The plan of `F(x_k, y_k)` (`sign = 1`) or `F_−(x_k, y_k)` (`sign = −1`).
///
/// `x_k` must be a pure momentum combination `b·x` and `y_k` a pure position
/// combination `a·t` with `a·b = 0`. In two dimensions with `b` not along an
/// axis, coordinates are rotated by the angle `θ` of `b`, so that
/// `x_k = |b|·x_u` and `y_k = a_v·v`; the multiplier `F(|b|πκ_u, a_v v)` is
/// applied along `u`, and the rotation is undone.
pub fn plan_f<T: ExactScalar>(
    kernel: &FKernel,
    sign: i64,
    xk: &OperatorCoeffs<T>,
    yk: &OperatorCoeffs<T>,
    grid: &Grid,
) -> Result<GridOperatorPlan, OpcalcError> {
    check_dim(grid, xk)?;
    check_dim(grid, yk)?;
    if !xk.is_pure_momentum() || !xk.scalar.is_zero() {
        return Err(OpcalcError::UnsupportedShape(
            "x_k must be a pure momentum combination".into(),
        ));
    }
    if !yk.is_pure_position() || !yk.scalar.is_zero() {
        return Err(OpcalcError::UnsupportedShape(
            "y_k must be a pure position combination".into(),
        ));
    }
    let q = commutator(xk, yk);
    if !q.is_zero() {
        return Err(OpcalcError::NonCommuting(format!(
            "[x_k, y_k] = {}·πi",
            q.to_ratio_string()
        )));
    }
    let (_, b) = xk.to_f64();
    let (a, _) = yk.to_f64();
    let t = grid.positions();
    let kappa = grid.momenta();
    let eval = |x: f64, y: f64| kernel.eval_signed(sign, x, y).map_err(OpcalcError::from);
    if b.iter().all(|v| *v == 0.0) {
        let values = try_lattice(grid, |i, j| {
            let y = if grid.d == 1 {
                a[0] * t[i]
            } else {
                a[0] * t[i] + a[1] * t[j]
            };
            eval(0.0, y)
        })?;
        return Ok(GridOperatorPlan::Multiplier(Arc::new(values)));
    }
    if grid.d == 1 {
        let values = try_lattice(grid, |i, _| eval(PI * b[0] * kappa[i], 0.0))?;
        return Ok(GridOperatorPlan::FourierMultiplier {
            axes: vec![0],
            values: Arc::new(values),
        });
    }
    // Aligned with an axis: no resampling.
    for axis in 0..2 {
        let other = 1 - axis;
        if b[other] == 0.0 {
            let values = try_lattice(grid, |i, j| {
                let (k, o) = if axis == 0 { (i, j) } else { (j, i) };
                eval(PI * b[axis] * kappa[k], a[other] * t[o])
            })?;
            return Ok(GridOperatorPlan::FourierMultiplier {
                axes: vec![axis],
                values: Arc::new(values),
            });
        }
    }
    let theta = b[1].atan2(b[0]);
    let norm_b = b[0].hypot(b[1]);
    let (c, s) = (theta.cos(), theta.sin());
    let a_v = -s * a[0] + c * a[1];
    let inner = try_lattice(grid, |i, j| eval(norm_b * PI * kappa[i], a_v * t[j]))?;
    let rot = rotation_plan(grid, theta)?;
    let back = rot.inverse();
    Ok(rot
        .then(GridOperatorPlan::FourierMultiplier {
            axes: vec![0],
            values: Arc::new(inner),
        })
        .then(back))
}

/// `F^ℏ_Λ(x_k, y_k)ψ`.
#[allow(non_snake_case)]
pub fn apply_F<T: ExactScalar>(
    params: QDParams,
    xk: &OperatorCoeffs<T>,
    yk: &OperatorCoeffs<T>,
    psi: &GridState,
) -> Result<GridState, OpcalcError> {
    let kernel = FKernel::new(params)?;
    apply_F_with(&kernel, 1, xk, yk, psi)
}

/// [`apply_F`] with a prepared kernel; `sign = −1` applies `F_−`.
#[allow(non_snake_case)]
pub fn apply_F_with<T: ExactScalar>(
    kernel: &FKernel,
    sign: i64,
    xk: &OperatorCoeffs<T>,
    yk: &OperatorCoeffs<T>,
    psi: &GridState,
) -> Result<GridState, OpcalcError> {
    plan_f(kernel, sign, xk, yk, &psi.grid)?.apply(psi)
}
