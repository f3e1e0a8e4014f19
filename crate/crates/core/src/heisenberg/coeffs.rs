//! Operator coefficient vectors and the commutator form.

use std::ops::{Add, Neg, Sub};

use serde_json::{json, Value};

use crate::exact::{dot, ExactScalar};

/// The operator `pos·s + mom·(−πi∂_s) + scalar·πi` over `dim` variables.
///
/// It is formally self-adjoint when `scalar` is zero, since both `s_j` and
/// `−πi∂_j` are.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorCoeffs<T> {
    pub pos: Vec<T>,
    pub mom: Vec<T>,
    pub scalar: T,
}

impl<T: ExactScalar> OperatorCoeffs<T> {
    /// The zero operator.
    pub fn zero(dim: usize) -> Self {
        OperatorCoeffs {
            pos: vec![T::zero(); dim],
            mom: vec![T::zero(); dim],
            scalar: T::zero(),
        }
    }

    /// Multiplication by `s_j`.
    pub fn position(dim: usize, j: usize) -> Self {
        let mut op = Self::zero(dim);
        op.pos[j] = T::one();
        op
    }

    /// The momentum `−πi ∂/∂s_j`.
    pub fn momentum(dim: usize, j: usize) -> Self {
        let mut op = Self::zero(dim);
        op.mom[j] = T::one();
        op
    }

    /// Pure position combination `Σ a_j s_j`.
    pub fn from_pos(pos: Vec<T>) -> Self {
        let dim = pos.len();
        OperatorCoeffs {
            pos,
            mom: vec![T::zero(); dim],
            scalar: T::zero(),
        }
    }

    /// Pure momentum combination `Σ b_j (−πi∂_j)`.
    pub fn from_mom(mom: Vec<T>) -> Self {
        let dim = mom.len();
        OperatorCoeffs {
            pos: vec![T::zero(); dim],
            mom,
            scalar: T::zero(),
        }
    }

    /// Number of variables.
    pub fn dim(&self) -> usize {
        self.pos.len()
    }

    /// `c·self`.
    pub fn scale(&self, c: &T) -> Self {
        OperatorCoeffs {
            pos: self.pos.iter().map(|a| a.clone() * c.clone()).collect(),
            mom: self.mom.iter().map(|b| b.clone() * c.clone()).collect(),
            scalar: self.scalar.clone() * c.clone(),
        }
    }

    /// `true` for the zero operator.
    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero() && self.pos.iter().chain(&self.mom).all(|x| x.is_zero())
    }

    /// `true` when there is no momentum part.
    pub fn is_pure_position(&self) -> bool {
        self.mom.iter().all(|x| x.is_zero())
    }

    /// `true` when there is no position part.
    pub fn is_pure_momentum(&self) -> bool {
        self.pos.iter().all(|x| x.is_zero())
    }

    /// Coefficients as `"p/q"` strings: `{"pos":[…],"mom":[…],"scalar":…}`.
    pub fn to_json(&self) -> Value {
        let s = |v: &[T]| {
            v.iter()
                .map(ExactScalar::to_ratio_string)
                .collect::<Vec<_>>()
        };
        json!({"pos": s(&self.pos), "mom": s(&self.mom), "scalar": self.scalar.to_ratio_string()})
    }

    /// Float copy of `(pos, mom)` for the numerical layer.
    pub fn to_f64(&self) -> (Vec<f64>, Vec<f64>) {
        (
            self.pos.iter().map(ExactScalar::to_f64).collect(),
            self.mom.iter().map(ExactScalar::to_f64).collect(),
        )
    }
}

fn zip_with<T: ExactScalar>(a: &[T], b: &[T], f: impl Fn(T, T) -> T) -> Vec<T> {
    assert_eq!(a.len(), b.len(), "operators on different variable sets");
    a.iter()
        .zip(b)
        .map(|(x, y)| f(x.clone(), y.clone()))
        .collect()
}

impl<T: ExactScalar> Add for &OperatorCoeffs<T> {
    type Output = OperatorCoeffs<T>;
    fn add(self, rhs: Self) -> OperatorCoeffs<T> {
        OperatorCoeffs {
            pos: zip_with(&self.pos, &rhs.pos, |x, y| x + y),
            mom: zip_with(&self.mom, &rhs.mom, |x, y| x + y),
            scalar: self.scalar.clone() + rhs.scalar.clone(),
        }
    }
}

impl<T: ExactScalar> Sub for &OperatorCoeffs<T> {
    type Output = OperatorCoeffs<T>;
    fn sub(self, rhs: Self) -> OperatorCoeffs<T> {
        self + &(-rhs)
    }
}

impl<T: ExactScalar> Neg for &OperatorCoeffs<T> {
    type Output = OperatorCoeffs<T>;
    fn neg(self) -> OperatorCoeffs<T> {
        self.scale(&-T::one())
    }
}

/// The commutator `[A, B] = q·πi`, returning `q`.
///
/// From `[s_j, −πi∂_k] = πi δ_jk` one gets `q = A.pos·B.mom − A.mom·B.pos`.
/// Scalar parts are central and drop out.
pub fn commutator<T: ExactScalar>(a: &OperatorCoeffs<T>, b: &OperatorCoeffs<T>) -> T {
    dot(&a.pos, &b.mom) - dot(&a.mom, &b.pos)
}

/// The constant `q` with `[A, B] = q·πi·id`.
///
/// Writing `[A, B] = ic` with `c = πq`, the Weyl relation reads
/// `e^{iαA} e^{iβB} = e^{−icαβ} e^{iβB} e^{iαA}`; the grid layer uses this
/// phase.
pub fn check_weyl_consistency<T: ExactScalar>(a: &OperatorCoeffs<T>, b: &OperatorCoeffs<T>) -> T {
    commutator(a, b)
}

/// The commutator form on operators over a fixed number of variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CommutatorForm {
    pub dimension: usize,
}

impl CommutatorForm {
    /// `q` with `[A, B] = q·πi`. Panics if either operand has the wrong dimension.
    pub fn value<T: ExactScalar>(&self, a: &OperatorCoeffs<T>, b: &OperatorCoeffs<T>) -> T {
        assert!(
            a.dim() == self.dimension && b.dim() == self.dimension,
            "operand dimension differs from form"
        );
        commutator(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn position_momentum_commutator_is_pi_i() {
        let t = OperatorCoeffs::<Rational>::position(1, 0);
        let p = OperatorCoeffs::<Rational>::momentum(1, 0);
        assert_eq!(check_weyl_consistency(&t, &p), Rational::from_i64(1));
        assert_eq!(commutator(&p, &t), Rational::from_i64(-1));
    }

    #[test]
    fn arithmetic() {
        let a = OperatorCoeffs::<Rational>::position(2, 0);
        let b = OperatorCoeffs::<Rational>::momentum(2, 1);
        let s = &a + &b;
        assert_eq!(&s - &b, a);
        assert!((&s - &s).is_zero());
        assert!(a.is_pure_position() && b.is_pure_momentum() && !s.is_pure_position());
    }
}
