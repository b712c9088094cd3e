//! Foundational scalar/vector/matrix kernels shared by every other module:
//! dense ambient vectors, small dense matrices, a symmetric Jacobi
//! eigensolver, real polynomial root finding with multiplicity estimation,
//! and second-order jets with analytic or central-difference backends.
//!
//! Everything here is deliberately desk-scale: matrix dimensions are capped
//! at [`MAX_EIGEN_DIM`] and polynomial degrees at [`MAX_POLY_DEGREE`], which
//! keeps the dense kernels simple and lets every routine be validated
//! against brute-force oracles.

mod eigen;
mod jet;
mod mat;
mod roots;
mod vec;

pub use eigen::{sym_eigen, SymEigen};
pub use jet::{
    central_directional, central_directional_scalar, central_first, check_margin, fd_steps,
    jet2_eval, DiffBackend, Jet2, MapCallback,
};
pub use mat::{orthonormal_complement, orthonormalize, Mat};
pub use roots::{poly_derivative, poly_eval, real_roots, RootWithMultiplicity};
pub use vec::VecA;

use thiserror::Error;

/// Largest symmetric matrix dimension the eigensolver accepts.
pub const MAX_EIGEN_DIM: usize = 16;

/// Largest polynomial degree the root finder accepts.
pub const MAX_POLY_DEGREE: usize = 32;

/// Absolute floor below which a polynomial counts as identically zero.
pub const ZERO_POLY_FLOOR: f64 = 1e-14;

/// Default relative step for the central-difference backend.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("matrix not symmetric: max |M - M^T| = {deviation:.3e} exceeds {limit:.3e}")]
    NonSymmetric { deviation: f64, limit: f64 },
    #[error("eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("polynomial is identically zero (all coefficients below {ZERO_POLY_FLOOR:.0e}); every value is a root")]
    ZeroPolynomial,
    #[error("point too close to the chart boundary: needs margin {needed:.3e} on axis {axis}")]
    DomainMargin { axis: usize, needed: f64 },
    #[error("dimension {got} exceeds the supported cap {cap}")]
    DimensionCap { got: usize, cap: usize },
    #[error("analytic backend requires a jet callback")]
    MissingJetCallback,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular linear system: |pivot| = {0:.3e}")]
    SingularSystem(f64),
}
