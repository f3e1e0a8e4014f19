//! The reducible and the constrained irreducible Heisenberg solutions.

use serde_json::{json, Map, Value};

use super::{commutator, HeisenbergError, OperatorCoeffs};
use crate::exact::{ExactScalar, Matrix};
use crate::triangulation::ExchangeMatrix;
use crate::IntMatrix;

/// Operators `x_i, y_i` for every arc `i`, acting on functions of the
/// variables listed in `variables` (each variable is named after an arc).
#[derive(Clone, Debug, PartialEq)]
pub struct HeisenbergSolution<T> {
    /// Arc index carried by each variable, in variable order.
    pub variables: Vec<usize>,
    /// Name prefix of the variables (`"t"` or `"s"`).
    pub variable_name: &'static str,
    pub x: Vec<OperatorCoeffs<T>>,
    pub y: Vec<OperatorCoeffs<T>>,
}

/// Which constraint sums `Σ_i v_{i,p} x_i` and `Σ_i v_{i,p} y_i` vanish.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintReport {
    /// Punctures whose x-constraint fails.
    pub x_failures: Vec<usize>,
    /// Punctures whose y-constraint fails.
    pub y_failures: Vec<usize>,
}

impl ConstraintReport {
    /// Every x-constraint holds.
    pub fn x_ok(&self) -> bool {
        self.x_failures.is_empty()
    }

    /// Every y-constraint holds.
    pub fn y_ok(&self) -> bool {
        self.y_failures.is_empty()
    }
}

impl<T: ExactScalar> HeisenbergSolution<T> {
    /// Number of arcs.
    pub fn arc_count(&self) -> usize {
        self.x.len()
    }

    /// Every violated relation among `[x_i, x_j] = 0`, `[y_i, y_j] = 0` and
    /// `[x_i, y_j] = πi ε_ij`, described in 1-based labels.
    pub fn heisenberg_defects(&self, eps: &IntMatrix) -> Vec<String> {
        let m = self.arc_count();
        let mut out = Vec::new();
        for i in 0..m {
            for j in 0..m {
                let checks = [
                    ("x", "x", commutator(&self.x[i], &self.x[j]), 0),
                    ("y", "y", commutator(&self.y[i], &self.y[j]), 0),
                    ("x", "y", commutator(&self.x[i], &self.y[j]), eps[i][j]),
                ];
                for (a, b, got, want) in checks {
                    if got != T::from_i64(want) {
                        out.push(format!(
                            "[{a}_{}, {b}_{}] = {}·πi, expected {want}·πi",
                            i + 1,
                            j + 1,
                            got
                        ));
                    }
                }
            }
        }
        out
    }

    /// The constraint sums for every puncture.
    pub fn constraint_sums(
        &self,
        valences: &IntMatrix,
    ) -> Vec<(OperatorCoeffs<T>, OperatorCoeffs<T>)> {
        let n = valences.first().map_or(0, Vec::len);
        let dim = self.variables.len();
        (0..n)
            .map(|p| {
                let mut xs = OperatorCoeffs::zero(dim);
                let mut ys = OperatorCoeffs::zero(dim);
                for (i, row) in valences.iter().enumerate() {
                    let v = T::from_i64(row[p]);
                    xs = &xs + &self.x[i].scale(&v);
                    ys = &ys + &self.y[i].scale(&v);
                }
                (xs, ys)
            })
            .collect()
    }

    /// Checks both constraint equations at every puncture.
    pub fn constraints(&self, valences: &IntMatrix) -> ConstraintReport {
        let sums = self.constraint_sums(valences);
        ConstraintReport {
            x_failures: sums
                .iter()
                .enumerate()
                .filter(|(_, (x, _))| !x.is_zero())
                .map(|(p, _)| p)
                .collect(),
            y_failures: sums
                .iter()
                .enumerate()
                .filter(|(_, (_, y))| !y.is_zero())
                .map(|(p, _)| p)
                .collect(),
        }
    }

    /// `{"variables":["s_3",…],"operators":{"x_1":{"pos":…,"mom":…,"scalar":…},…}}`.
    pub fn to_json(&self) -> Value {
        let variables: Vec<String> = self
            .variables
            .iter()
            .map(|a| format!("{}_{}", self.variable_name, a + 1))
            .collect();
        let mut ops = Map::new();
        for (i, (x, y)) in self.x.iter().zip(&self.y).enumerate() {
            ops.insert(format!("x_{}", i + 1), x.to_json());
            ops.insert(format!("y_{}", i + 1), y.to_json());
        }
        json!({"variables": variables, "operators": ops})
    }
}

/// `x_i = −πi ∂/∂t_i` and `y_i = Σ_j ε_ij t_j` on functions of all arcs.
pub fn reducible_solution<T: ExactScalar>(eps: &ExchangeMatrix) -> HeisenbergSolution<T> {
    let m = eps.arc_count();
    HeisenbergSolution {
        variables: (0..m).collect(),
        variable_name: "t",
        x: (0..m).map(|i| OperatorCoeffs::momentum(m, i)).collect(),
        y: eps
            .eps
            .iter()
            .map(|row| OperatorCoeffs::from_pos(row.iter().map(|&e| T::from_i64(e)).collect()))
            .collect(),
    }
}

/// Column-reduced echelon form of the valence matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct EchelonData<T> {
    /// Pivot rows `i_1 < … < i_n`; pivot `j` sits in column `j`.
    pub pivots: Vec<usize>,
    /// The reduced `|Δ| × n` matrix `w`, with `w_{i_j, l} = δ_jl`.
    pub reduced: Matrix<T>,
    /// Arcs that are not pivots, in increasing order.
    pub ring_delta: Vec<usize>,
}

/// Column-reduces the valence matrix `v` (arcs × punctures).
///
/// The columns of the result span the same subspace of `ker ε` as those of
/// `v`, and the pivot rows are the smallest admissible row indices.
pub fn echelon_reduce<T: ExactScalar>(
    valences: &IntMatrix,
) -> Result<EchelonData<T>, HeisenbergError> {
    let v: Matrix<T> = Matrix::from_int_rows(valences);
    let n = v.cols();
    let (r, pivots) = v.transpose().rref();
    if pivots.len() < n {
        return Err(HeisenbergError::RankDeficient {
            rank: pivots.len(),
            expected: n,
        });
    }
    let ring_delta = (0..v.rows()).filter(|i| !pivots.contains(i)).collect();
    Ok(EchelonData {
        pivots,
        reduced: r.transpose(),
        ring_delta,
    })
}

/// The irreducible solution on functions of the non-pivot arcs `s_k`, `k ∈ Δ̊`:
/// `x_i = −πi ∂/∂s_i` for `i ∈ Δ̊`, `x_{i_j} = Σ_{k∈Δ̊} πi w_{k,j} ∂/∂s_k`, and
/// `y_i = Σ_{k∈Δ̊} ε_ik s_k` for every arc.
pub fn irreducible_solution<T: ExactScalar>(
    eps: &ExchangeMatrix,
    ech: &EchelonData<T>,
) -> Result<HeisenbergSolution<T>, HeisenbergError> {
    let m = eps.arc_count();
    if ech.reduced.rows() != m {
        return Err(HeisenbergError::DimensionMismatch {
            expected: m,
            found: ech.reduced.rows(),
        });
    }
    let ring = &ech.ring_delta;
    let dim = ring.len();
    let mut x = vec![OperatorCoeffs::zero(dim); m];
    for (local, &k) in ring.iter().enumerate() {
        x[k] = OperatorCoeffs::momentum(dim, local);
    }
    for (j, &ij) in ech.pivots.iter().enumerate() {
        x[ij] =
            OperatorCoeffs::from_mom(ring.iter().map(|&k| -ech.reduced[(k, j)].clone()).collect());
    }
    let y = (0..m)
        .map(|i| {
            OperatorCoeffs::from_pos(ring.iter().map(|&k| T::from_i64(eps.eps[i][k])).collect())
        })
        .collect();
    Ok(HeisenbergSolution {
        variables: ring.clone(),
        variable_name: "s",
        x,
        y,
    })
}
