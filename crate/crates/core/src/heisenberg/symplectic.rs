//! Linear coordinate changes and their action on operator coefficients.

use serde_json::{json, Value};

use super::{commutator, OperatorCoeffs};
use crate::exact::{ExactScalar, Matrix};
use crate::triangulation::Permutation;
use crate::IntMatrix;

/// A linear change of coordinates `t' = M t` and its induced action on
/// operators.
///
/// `coord` is `M`: the pullback of the new coordinate `t'_i` is
/// `Σ_j M_ij t_j`. An operator written in the new coordinates is rewritten in
/// the old ones by [`LinearSymplecticMap::apply`]; positions transform by `Mᵀ`
/// and momenta by `M⁻¹` (chain rule), so `matrix = diag(Mᵀ, M⁻¹)` on
/// `pos ⊕ mom`. `det` is `det M`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSymplecticMap<T> {
    pub coord: Matrix<T>,
    pub matrix: Matrix<T>,
    pub det: T,
}

impl<T: ExactScalar> LinearSymplecticMap<T> {
    /// Builds the map from an invertible coordinate matrix.
    pub fn from_coord(coord: Matrix<T>) -> Option<Self> {
        let inv = coord.inverse()?;
        let matrix = coord.transpose().block_diag(&inv);
        let det = coord.det();
        Some(LinearSymplecticMap { coord, matrix, det })
    }

    /// The identity on `m` variables.
    pub fn identity(m: usize) -> Self {
        Self::from_coord(Matrix::identity(m)).expect("identity is invertible")
    }

    /// Number of variables.
    pub fn dim(&self) -> usize {
        self.coord.rows()
    }

    /// Rewrites an operator given in the new coordinates in the old ones.
    pub fn apply(&self, op: &OperatorCoeffs<T>) -> OperatorCoeffs<T> {
        let m = self.dim();
        assert_eq!(op.dim(), m, "operator dimension differs from map");
        let v: Vec<T> = op.pos.iter().chain(&op.mom).cloned().collect();
        let w = self.matrix.mul_vec(&v);
        OperatorCoeffs {
            pos: w[..m].to_vec(),
            mom: w[m..].to_vec(),
            scalar: op.scalar.clone(),
        }
    }

    /// `self` followed by `next`: coordinates change by `self` first.
    pub fn then(&self, next: &Self) -> Self {
        Self::from_coord(next.coord.mul(&self.coord)).expect("product of invertible maps")
    }

    /// The inverse coordinate change.
    pub fn inverse(&self) -> Self {
        Self::from_coord(self.coord.inverse().expect("invertible by construction"))
            .expect("invertible")
    }

    /// `true` for the identity.
    pub fn is_identity(&self) -> bool {
        self.coord.is_identity()
    }

    /// `true` when `matrix` preserves the commutator form on `pos ⊕ mom`.
    pub fn preserves_form(&self) -> bool {
        let m = self.dim();
        let unit = |k: usize| {
            let mut op = OperatorCoeffs::zero(m);
            if k < m {
                op.pos[k] = T::one();
            } else {
                op.mom[k - m] = T::one();
            }
            op
        };
        (0..2 * m).all(|a| {
            (0..2 * m).all(|b| {
                let (ua, ub) = (unit(a), unit(b));
                commutator(&self.apply(&ua), &self.apply(&ub)) == commutator(&ua, &ub)
            })
        })
    }

    /// `{"coord":[["p/q",…],…],"det":"p/q"}`.
    pub fn to_json(&self) -> Value {
        json!({"coord": self.coord.to_string_rows(), "det": self.det.to_ratio_string()})
    }
}

/// Coordinate pullback of the flip at `k` with the sign `s` of its c-vector:
/// `t'_k = −t_k + Σ_j [−s ε_kj]_+ t_j` and `t'_i = t_i` otherwise.
///
/// For `s = +1` this is the monomial transformation of the flip as usually
/// written. Using the c-vector sign makes the composite linear part of a word
/// depend only on its endpoints.
pub fn tropical_monomial_map<T: ExactScalar>(
    eps: &IntMatrix,
    k: usize,
    s: i64,
) -> LinearSymplecticMap<T> {
    assert!(s == 1 || s == -1, "sign must be ±1");
    let m = eps.len();
    let coord = Matrix::from_fn(m, m, |i, j| {
        if i != k {
            T::from_i64(i64::from(i == j))
        } else if j == k {
            -T::one()
        } else {
            T::from_i64((-s * eps[k][j]).max(0))
        }
    });
    LinearSymplecticMap::from_coord(coord).expect("flip pullback is an involution")
}

/// Coordinate pullback of the flip at `k`: `t'_k = −t_k + Σ_j [−ε_kj]_+ t_j`.
pub fn monomial_map<T: ExactScalar>(eps: &IntMatrix, k: usize) -> LinearSymplecticMap<T> {
    tropical_monomial_map(eps, k, 1)
}

/// Coordinate pullback of the relabeling `σ`: `t'_{σ(i)} = t_i`.
pub fn permutation_map<T: ExactScalar>(sigma: &Permutation) -> LinearSymplecticMap<T> {
    let m = sigma.len();
    let coord = Matrix::from_fn(m, m, |r, c| T::from_i64(i64::from(sigma.apply(c) == r)));
    LinearSymplecticMap::from_coord(coord).expect("permutation matrices are invertible")
}
