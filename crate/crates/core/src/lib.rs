//! Numerical engine for families of oriented lines in `R^(n+1)`.
//!
//! An oriented line is encoded as a pair `(ξ, η)` with `ξ` a unit direction
//! and `η` the point on the line closest to the origin, so the space of
//! oriented lines is modelled by the tangent bundle of the unit `n`-sphere.
//! On that model the crate evaluates the canonical Liouville form `θ` and
//! symplectic form `Ω = -dθ`, tests isotropy of line families, locates focal
//! points along lines, builds focal sheets of hypersurfaces, and verifies the
//! curvature identities that tie the sheets' sectional and Ricci curvature to
//! the astigmatism (differences of radii of curvature) of the generating
//! hypersurface.
//!
//! Module layout:
//!
//! - [`numerics`]: dense vector/matrix kernels, a Jacobi eigensolver for
//!   small symmetric matrices, real polynomial root finding with
//!   multiplicities, and pluggable differentiation backends (analytic jets or
//!   central finite differences).
//! - [`line_space`]: the model of the space of oriented lines — points,
//!   tangent vectors in horizontal/vertical splitting, `θ`, `Ω`, the
//!   evaluation map `Ψ` and its derivative, and pencils of lines through a
//!   fixed point.
//! - [`families`]: parametrized submanifolds carrying unit vector fields,
//!   the line-family map `Φ_v`, pullbacks of `Ω`, isotropy/geodesic/Frobenius
//!   diagnostics, and reconstruction of orthogonal submanifolds.
//! - [`focal`]: focal-point location along lines, shape spectra of
//!   hypersurfaces, ridge detection, focal sheets, astigmatism, and signed
//!   distances between sheets.
//! - [`curvature`]: induced metric and second fundamental form, sectional and
//!   Ricci curvature via the Gauss equation, and grid verifiers comparing
//!   sheet curvature against astigmatism formulas.
//! - [`catalog`]: built-in surfaces (plane, sphere, ellipsoid, torus, surface
//!   of revolution, polynomial graph) and named unit fields (normal,
//!   meridian, latitude, great circle, surface gradient).
//! - [`grid`]: rectilinear parameter-space grids shared by the sampling and
//!   reporting layers.
//!
//! All value types are immutable after construction and all operations are
//! pure, so everything here is safe to call from multiple threads.

// Dense index-juggling kernels read more clearly with explicit loops,
// and boxed callback signatures are part of the public surface.
#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod catalog;
pub mod curvature;
pub mod families;
pub mod focal;
pub mod grid;
pub mod line_space;
pub mod numerics;
pub mod rng;

pub use families::{Chart, DomainBox, FamilyError, FieldKind, LineFamily, UnitField};
pub use focal::{FocalError, FocalHit, FocalSheet, ShapeSpectrum};
pub use grid::{Grid, GridAxis};
pub use line_space::{LineSpaceError, OrientedLine, SplitTangent};
pub use numerics::{DiffBackend, Jet2, Mat, NumericsError, VecA};
