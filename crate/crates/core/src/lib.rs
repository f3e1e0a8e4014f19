//! Desk-scale machinery for mapping class group representations arising in
//! quantum 3d gravity.
//!
//! The crate is organised bottom-up:
//!
//! * [`triangulation`]: labeled ideal triangulations of punctured surfaces,
//!   flips, label permutations, exchange matrices and groupoid words.
//! * [`qdilog`]: the compact quantum dilogarithm ψ^q, the non-compact
//!   Φ^ℏ (Barnes integral), the modular-double pair Φ^{±iℏ} and the two-variable
//!   kernels F^ℏ_Λ for Λ ∈ {−1, 0, +1}.
//! * [`heisenberg`]: exact first-order operators (positions and momenta with
//!   rational coefficients), the reducible and constrained irreducible
//!   Heisenberg solutions and the linear (symplectic) parts of flips.
//! * [`opcalc`]: functional calculus on sampled `L²(ℝ^d)`, `d ∈ {1, 2}`, and
//!   numerical pentagon checks.
//! * [`intertwiner`]: compilation of groupoid words into intertwiner
//!   descriptors, consistency-relation suites and representation elements.
//!
//! Exact parts are generic over [`exact::ExactScalar`]; the aliases below fix
//! the default scalar. Numerical parts work in `f64` throughout.

pub mod exact;
pub mod fixtures;
pub mod heisenberg;
pub mod intertwiner;
pub mod numfmt;
pub mod opcalc;
pub mod qdilog;
pub mod triangulation;

mod error;

pub use error::Error;

/// Complex double-precision scalar used by every numerical module.
pub type C64 = num_complex::Complex64;

/// Default exact scalar: arbitrary-precision rationals.
pub type Rational = num_rational::BigRational;

/// Exact matrix over the default scalar.
pub type QMatrix = exact::Matrix<Rational>;

/// Operator coefficients over the default scalar.
pub type Coeffs = heisenberg::OperatorCoeffs<Rational>;

/// Linear symplectic map over the default scalar.
pub type SymplecticMap = heisenberg::LinearSymplecticMap<Rational>;

/// Integer matrix stored as rows (exchange matrices, valences, c-vectors).
pub type IntMatrix = Vec<Vec<i64>>;
