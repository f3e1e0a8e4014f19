//! Numerical checks of the pentagon operator identities on grids.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::grid::{GaussianState, Grid, GridState};
use super::ops::plan_f;
use super::plan::{GridOperatorPlan, RESAMPLING_BUDGET};
use super::OpcalcError;
use crate::heisenberg::{check_weyl_consistency, reducible_solution, OperatorCoeffs};
use crate::numfmt::{fmt17, json17};
use crate::qdilog::{FKernel, PhiTable, QDParams};
use crate::triangulation::ExchangeMatrix;
use crate::{Coeffs, Rational, C64};

/// Boundary mass above which a test state is rejected.
pub const TEST_STATE_BOUNDARY_TOLERANCE: f64 = 1e-10;

/// Acceptance tolerance for pentagon residuals at `N = 1024`, `L = 12`.
pub const PENTAGON_TOLERANCE: f64 = 1e-3;

/// Residual of one test state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateResidual {
    pub state: GaussianState,
    /// `‖LHSψ − RHSψ‖ / ‖ψ‖`.
    pub residual: f64,
    /// Boundary mass of the input state.
    pub boundary_mass: f64,
}

/// Outcome of a pentagon check over a set of test states.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    /// `None` for the `Φ^ℏ` pentagon.
    pub lambda: Option<i64>,
    pub hbar: f64,
    pub grid: Grid,
    pub per_state: Vec<StateResidual>,
    /// Largest rotation resampling error estimate over all states.
    pub resampling_estimate: f64,
}

impl ResidualReport {
    /// Largest residual over the test states.
    pub fn max_residual(&self) -> f64 {
        self.per_state
            .iter()
            .map(|s| s.residual)
            .fold(0.0, f64::max)
    }

    /// `{lambda, hbar, N, L, states, max_residual, per_state:[…]}`.
    pub fn to_json(&self) -> Value {
        let per_state: Vec<Value> = self
            .per_state
            .iter()
            .map(|s| {
                json!({
                    "center": s.state.center.iter().map(|&x| json17(x)).collect::<Vec<_>>(),
                    "width": s.state.width.iter().map(|&x| json17(x)).collect::<Vec<_>>(),
                    "boost": s.state.boost.iter().map(|&x| json17(x)).collect::<Vec<_>>(),
                    "residual": json17(s.residual),
                    "boundary_mass": json17(s.boundary_mass),
                })
            })
            .collect();
        json!({
            "lambda": self.lambda,
            "hbar": json17(self.hbar),
            "d": self.grid.d,
            "N": self.grid.n,
            "L": json17(self.grid.l),
            "states": self.per_state.len(),
            "max_residual": json17(self.max_residual()),
            "resampling_estimate": json17(self.resampling_estimate),
            "per_state": per_state,
        })
    }
}

/// CSV of a refinement study: `N,L,max_residual,r_0,r_1,…`.
pub fn refinement_csv(reports: &[ResidualReport]) -> String {
    let width = reports.iter().map(|r| r.per_state.len()).max().unwrap_or(0);
    let mut s = String::from("N,L,max_residual");
    for i in 0..width {
        s.push_str(&format!(",r_{i}"));
    }
    s.push('\n');
    for r in reports {
        s.push_str(&format!(
            "{},{},{}",
            r.grid.n,
            fmt17(r.grid.l),
            fmt17(r.max_residual())
        ));
        for p in &r.per_state {
            s.push(',');
            s.push_str(&fmt17(p.residual));
        }
        s.push('\n');
    }
    s
}

/// The refinement ladder `(N, L) = (512, 12/√2), (1024, 12), (2048, 12√2)`.
///
/// Doubling `N` while scaling `L` by `√2` refines both the cell size and the
/// momentum spacing.
pub fn refinement_ladder(d: usize) -> Result<Vec<Grid>, OpcalcError> {
    [512usize, 1024, 2048]
        .iter()
        .map(|&n| Grid::new(d, n, 12.0 * (n as f64 / 1024.0).sqrt()))
        .collect()
}

/// Default one-dimensional test states `(width, center, boost)`.
pub fn default_phi_states() -> Vec<GaussianState> {
    [
        (1.5, 0.0, 1.0),
        (1.5, 0.5, 1.0),
        (1.5, -0.5, 1.0),
        (1.25, 1.0, 1.0),
        (1.25, 0.5, 1.0),
    ]
    .iter()
    .map(|&(w, c, k)| GaussianState::new_1d(w, c, k))
    .collect()
}

/// Default two-dimensional test states.
pub fn default_f_states() -> Vec<GaussianState> {
    vec![
        GaussianState::new_2d([1.0, 1.0], [0.0, 0.0], [0.0, 0.0]),
        GaussianState::new_2d([1.0, 1.25], [0.5, -0.3], [0.5, 0.0]),
        GaussianState::new_2d([1.25, 1.0], [-0.5, 0.5], [0.0, 0.5]),
        GaussianState::new_2d([0.75, 0.75], [0.0, 0.5], [0.25, -0.25]),
        GaussianState::new_2d([1.5, 1.5], [0.25, 0.25], [0.0, 0.0]),
    ]
}

fn prepare(grid: &Grid, g: &GaussianState) -> Result<(GridState, f64), OpcalcError> {
    let psi = GridState::gaussian(*grid, g)?;
    let mass = psi.boundary_mass();
    if mass > TEST_STATE_BOUNDARY_TOLERANCE {
        return Err(OpcalcError::SupportOverflow(format!(
            "test state {g:?} has boundary mass {mass:e} on N = {}, L = {}",
            grid.n, grid.l
        )));
    }
    Ok((psi, mass))
}

/// Applies both sides of an identity, given as plan sequences applied left to
/// right, to every state in parallel.
pub(crate) fn residuals(
    grid: &Grid,
    states: &[GaussianState],
    lhs: &[&GridOperatorPlan],
    rhs: &[&GridOperatorPlan],
    budget: f64,
) -> Result<(Vec<StateResidual>, f64), OpcalcError> {
    let run =
        |psi: &GridState, plans: &[&GridOperatorPlan]| -> Result<(GridState, f64), OpcalcError> {
            let (mut cur, mut est) = (psi.clone(), 0.0f64);
            for p in plans {
                let (next, e) = p.apply_tracked(&cur, budget)?;
                cur = next;
                est = est.max(e);
            }
            Ok((cur, est))
        };
    let rows = states
        .par_iter()
        .map(|g| {
            let (psi, boundary_mass) = prepare(grid, g)?;
            let (left, e1) = run(&psi, lhs)?;
            let (right, e2) = run(&psi, rhs)?;
            let residual = left.distance(&right) / psi.norm();
            Ok((
                StateResidual {
                    state: g.clone(),
                    residual,
                    boundary_mass,
                },
                e1.max(e2),
            ))
        })
        .collect::<Result<Vec<_>, OpcalcError>>()?;
    let estimate = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok((rows.into_iter().map(|r| r.0).collect(), estimate))
}

/// The chirp exponent `α` with `e^{iαQ²} P e^{−iαQ²} = P + Q`.
///
/// From `[P, Q] = πi·q·ℏ` one gets `[Q², P] = −2πi·q·ℏ·Q`, hence
/// `e^{iαQ²} P e^{−iαQ²} = P + iα[Q², P] = P + 2π·q·ℏ·α·Q`, and
/// `α = 1/(2π·q·ℏ)`. For `P = 2πiℏ d/dx = −2ℏ·x` (with `x = −πi d/dx`) and
/// `Q = t`, `q = 2` and `α = 1/(4πℏ)`.
pub fn phi_pentagon_chirp(hbar: f64) -> f64 {
    let p_unit: Coeffs = OperatorCoeffs::from_mom(vec![Rational::from_integer((-2).into())]);
    let q_op: Coeffs = OperatorCoeffs::from_pos(vec![Rational::from_integer(1.into())]);
    let q = check_weyl_consistency(&p_unit, &q_op);
    debug_assert_eq!(q, Rational::from_integer(2.into()));
    1.0 / (2.0 * PI * crate::exact::ExactScalar::to_f64(&q) * hbar)
}

/// Checks `Φ(P)Φ(Q) = Φ(Q)Φ(P+Q)Φ(P)` for `Q = t`, `P = 2πiℏ d/dx`.
pub fn verify_phi_pentagon(
    hbar: f64,
    grid: &Grid,
    states: &[GaussianState],
) -> Result<ResidualReport, OpcalcError> {
    let table = PhiTable::new(hbar)?;
    verify_phi_pentagon_with(hbar, grid, states, |x| table.phi(x))
}

/// [`verify_phi_pentagon`] with an arbitrary function in place of `Φ^ℏ`.
pub fn verify_phi_pentagon_with(
    hbar: f64,
    grid: &Grid,
    states: &[GaussianState],
    phi: impl Fn(f64) -> C64 + Sync,
) -> Result<ResidualReport, OpcalcError> {
    if grid.d != 1 {
        return Err(OpcalcError::InvalidGrid(
            "the Φ pentagon runs on a one-dimensional grid".into(),
        ));
    }
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(OpcalcError::InvalidGrid(format!(
            "ℏ must be positive, got {hbar}"
        )));
    }
    let t = grid.positions();
    let kappa = grid.momenta();
    // P acts on the mode e^{iκt} by −2πℏκ.
    let a_q =
        GridOperatorPlan::Multiplier(t.par_iter().map(|&x| phi(x)).collect::<Vec<_>>().into());
    let a_p = GridOperatorPlan::FourierMultiplier {
        axes: vec![0],
        values: kappa
            .par_iter()
            .map(|&k| phi(-2.0 * PI * hbar * k))
            .collect::<Vec<_>>()
            .into(),
    };
    let a_pq = GridOperatorPlan::ChirpConjugated {
        exponent: phi_pentagon_chirp(hbar),
        inner: Box::new(a_p.clone()),
    };
    let (per_state, resampling_estimate) = residuals(
        grid,
        states,
        &[&a_q, &a_p],
        &[&a_p, &a_pq, &a_q],
        RESAMPLING_BUDGET,
    )?;
    Ok(ResidualReport {
        lambda: None,
        hbar,
        grid: *grid,
        per_state,
        resampling_estimate,
    })
}

/// The operators of the two-variable pentagon: the reducible solution for
/// `ε = [[0, 1], [−1, 0]]`, that is `x_j = −πi∂_j`, `y_1 = t_2`, `y_2 = −t_1`.
///
/// Returns `[x_1, y_1, x_2, y_2]` after confirming `[x_1, y_2] = [y_1, x_2] = πi`
/// and that every other pair commutes.
pub fn pentagon_operators() -> Result<[Coeffs; 4], OpcalcError> {
    let eps = ExchangeMatrix {
        eps: vec![vec![0, 1], vec![-1, 0]],
        valences: vec![Vec::new(), Vec::new()],
    };
    let sol = reducible_solution::<Rational>(&eps);
    let ops = [
        sol.x[0].clone(),
        sol.y[0].clone(),
        sol.x[1].clone(),
        sol.y[1].clone(),
    ];
    let one = Rational::from_integer(1.into());
    let zero = Rational::from_integer(0.into());
    for a in 0..4 {
        for b in 0..4 {
            let expected = match (a, b) {
                (0, 3) | (1, 2) => one.clone(),
                (3, 0) | (2, 1) => -one.clone(),
                _ => zero.clone(),
            };
            let q = check_weyl_consistency(&ops[a], &ops[b]);
            if q != expected {
                return Err(OpcalcError::NonCommuting(format!(
                    "pentagon operators {a}, {b} have commutator {q}·πi"
                )));
            }
        }
    }
    Ok(ops)
}

/// Checks `F(x₁,y₁)F(x₂,y₂) = F(x₂,y₂)F(x₁+x₂,y₁+y₂)F(x₁,y₁)` on a 2d grid.
#[allow(non_snake_case)]
pub fn verify_F_pentagon(
    params: QDParams,
    grid: &Grid,
    states: &[GaussianState],
) -> Result<ResidualReport, OpcalcError> {
    let kernel = FKernel::new(params)?;
    verify_F_pentagon_with(&kernel, grid, states, RESAMPLING_BUDGET)
}

/// [`verify_F_pentagon`] with a prepared kernel and an explicit budget for
/// the rotation resampling error estimate.
#[allow(non_snake_case)]
pub fn verify_F_pentagon_with(
    kernel: &FKernel,
    grid: &Grid,
    states: &[GaussianState],
    resampling_budget: f64,
) -> Result<ResidualReport, OpcalcError> {
    if grid.d != 2 {
        return Err(OpcalcError::InvalidGrid(
            "the F pentagon runs on a two-dimensional grid".into(),
        ));
    }
    let [x1, y1, x2, y2] = pentagon_operators()?;
    let a1 = plan_f(kernel, 1, &x1, &y1, grid)?;
    let a2 = plan_f(kernel, 1, &x2, &y2, grid)?;
    let a3 = plan_f(kernel, 1, &(&x1 + &x2), &(&y1 + &y2), grid)?;
    let (per_state, resampling_estimate) = residuals(
        grid,
        states,
        &[&a2, &a1],
        &[&a1, &a3, &a2],
        resampling_budget,
    )?;
    let p = kernel.params();
    Ok(ResidualReport {
        lambda: Some(p.lambda.as_i64()),
        hbar: p.hbar,
        grid: *grid,
        per_state,
        resampling_estimate,
    })
}
