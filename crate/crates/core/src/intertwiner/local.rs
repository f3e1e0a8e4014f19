//! Numerical evaluation of closed words that act on two arcs.
//!
//! Write the word as `A_1 ∘ K'_1 ∘ A_2 ∘ K'_2 ∘ ⋯` in word order, with `K'_j`
//! the operator of the coordinate change `M_j` and `A_j = F(x_{k_j}, y_{k_j})`
//! in the coordinates reached before move `j`. Conjugating every `K'` to the
//! right turns `A_j` into `F` of the pair pulled back through
//! `M_1, …, M_{j−1}`, and leaves the product of the `K'` at the right end.
//! For a relation that product is the identity, so the word is the identity
//! exactly when the pulled-back automorphism parts multiply to it.
//!
//! Only the two arcs of the relation are kept as variables. The linear
//! factors must not feed these arcs into the others, and the remaining
//! coordinates are frozen at zero, which is consistent because they never
//! mix with the local ones.

use super::{Factor, IntertwinerError, IntertwinerWord};
use num_traits::Zero;

use crate::exact::{ExactScalar, Matrix};
use crate::heisenberg::{LinearSymplecticMap, OperatorCoeffs};
use crate::opcalc::{plan_f, residuals, GaussianState, Grid, GridOperatorPlan, ResidualReport};
use crate::qdilog::FKernel;
use crate::{Coeffs, Rational, SymplecticMap};

/// An automorphism factor pulled back to the start coordinates of two arcs.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalAuto {
    pub arc: usize,
    pub sign: i64,
    pub x: Coeffs,
    pub y: Coeffs,
}

/// The automorphism factors of a closed word on the arcs `arcs`, pulled back
/// to the start coordinates, in application order.
///
/// Fails with `NotLocal` when a factor involves another arc or when a linear
/// factor feeds a local coordinate into another one, and with `NotClosed`
/// when the local linear part is not the identity.
pub fn localize(
    word: &IntertwinerWord,
    arcs: [usize; 2],
) -> Result<Vec<LocalAuto>, IntertwinerError> {
    let m = word.arc_count();
    let not_local = |reason: String| IntertwinerError::NotLocal { arcs, reason };
    if arcs[0] == arcs[1] || arcs.iter().any(|&a| a >= m) {
        return Err(not_local(format!("need two distinct arcs below {m}")));
    }
    let local = |a: usize| arcs.iter().position(|&b| b == a);
    let mut acc: SymplecticMap = LinearSymplecticMap::identity(2);
    let mut out = Vec::new();
    for f in word.factors.iter().rev() {
        match f {
            Factor::Auto(a) => {
                let k = local(a.arc)
                    .ok_or_else(|| not_local(format!("automorphism part at arc {}", a.arc)))?;
                let x = OperatorCoeffs::momentum(2, k);
                let y = OperatorCoeffs::from_pos(
                    arcs.iter()
                        .map(|&j| Rational::from_i64(a.eps[a.arc][j]))
                        .collect(),
                );
                out.push(LocalAuto {
                    arc: a.arc,
                    sign: a.sign,
                    x: acc.apply(&x),
                    y: acc.apply(&y),
                });
            }
            lin => {
                let map = lin.linear().expect("non-automorphism factors are linear");
                acc =
                    acc.then(&restrict(map, arcs).ok_or_else(|| {
                        not_local(format!("{} factor mixes arcs", lin.kind_name()))
                    })?);
            }
        }
    }
    if !acc.is_identity() {
        return Err(IntertwinerError::NotClosed(format!(
            "local coordinate change {:?}",
            acc.coord.to_string_rows()
        )));
    }
    out.reverse();
    Ok(out)
}

/// The block of `map` on `arcs`, provided no other coordinate depends on
/// them.
fn restrict(map: &SymplecticMap, arcs: [usize; 2]) -> Option<SymplecticMap> {
    let m = map.dim();
    for r in (0..m).filter(|r| !arcs.contains(r)) {
        if arcs.iter().any(|&c| !map.coord[(r, c)].is_zero()) {
            return None;
        }
    }
    LinearSymplecticMap::from_coord(Matrix::from_fn(2, 2, |i, j| {
        map.coord[(arcs[i], arcs[j])].clone()
    }))
}

/// `‖Wψ − ψ‖/‖ψ‖` for the operator `W` of a closed word on two arcs.
///
/// Each pulled-back automorphism part becomes a grid plan; the plans run in
/// application order on every test state.
pub fn local_residual(
    word: &IntertwinerWord,
    arcs: [usize; 2],
    kernel: &FKernel,
    grid: &Grid,
    states: &[GaussianState],
    resampling_budget: f64,
) -> Result<ResidualReport, IntertwinerError> {
    let params = *kernel.params();
    if let Some(a) = word.autos().find(|a| a.params != params) {
        return Err(IntertwinerError::Mismatch(format!(
            "factor at arc {} has parameters {:?}, the kernel {:?}",
            a.arc, a.params, params
        )));
    }
    if grid.d != 2 {
        return Err(crate::opcalc::OpcalcError::InvalidGrid(
            "two-arc words run on a two-dimensional grid".into(),
        )
        .into());
    }
    let plans = localize(word, arcs)?
        .iter()
        .map(|a| plan_f(kernel, a.sign, &a.x, &a.y, grid))
        .collect::<Result<Vec<GridOperatorPlan>, _>>()?;
    let refs: Vec<&GridOperatorPlan> = plans.iter().collect();
    let (per_state, resampling_estimate) = residuals(grid, states, &refs, &[], resampling_budget)?;
    Ok(ResidualReport {
        lambda: Some(params.lambda.as_i64()),
        hbar: params.hbar,
        grid: *grid,
        per_state,
        resampling_estimate,
    })
}
