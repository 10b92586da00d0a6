//! Spectral solver for the (2+1)-dimensional space-time fractional heat
//! equation
//!
//! ```text
//! D^alpha_t u(t,x,y) = D^beta_x u(t,x,y) + D^beta_y u(t,x,y) + f(t,x,y)
//! ```
//!
//! on the unit cube with zero initial data, discretized by Bernstein
//! operational matrices, together with the symmetry-side machinery of the
//! same equation: the five-dimensional Lie algebra of point symmetries, its
//! adjoint representation and one-dimensional optimal system, and the
//! Erdelyi-Kober operators that appear in the similarity reduction.
//!
//! All numerics are generic over the scalar type (see [`Real`]); the
//! concrete aliases below pin `f64`, which the stated tolerances assume.

// Domain guards are written as negated positive comparisons so that NaN
// arguments fail them too; coefficient tables keep their full published
// digits.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]

pub mod bernstein;
pub mod erdelyi_kober;
mod error;
pub mod fractional;
pub mod lie;
pub mod linalg;
pub mod operational;
pub mod quadrature;
mod scalar;
pub mod solver;
pub mod special;

pub use error::{Error, Result};
pub use scalar::Real;

pub use bernstein::BernsteinBasis;
pub use fractional::{Axis, FracOrder, PolySum3};
pub use lie::{CanonicalForm, GroupWord, LieElement, SymmetryAlgebra};
pub use linalg::Matrix;
pub use operational::OperationalMatrixSet;
pub use solver::{ProblemSpec, SpectralSolution};

/// Double-precision aliases for the main entry points.
pub type Matrix64 = Matrix<f64>;
pub type Basis64 = BernsteinBasis<f64>;
pub type PolySum64 = PolySum3<f64>;
pub type Problem64 = ProblemSpec<f64>;
pub type Solution64 = SpectralSolution<f64>;
pub type Algebra64 = SymmetryAlgebra<f64>;
