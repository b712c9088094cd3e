//! The space of oriented lines in `R^(n+1)`, modelled on the tangent bundle
//! of the unit `n`-sphere.
//!
//! A point is a pair `(ξ, η)`: unit direction `ξ` and foot point `η ⊥ ξ`
//! (the point of the line closest to the origin); the line is
//! `{η + tξ : t ∈ R}`. A tangent vector to the model splits into a
//! horizontal part `dπ(X)` (motion of the direction) and a vertical part
//! `K(X)` (covariant motion of the foot point), both lying in `ξ⊥`.
//!
//! On the model live the Liouville form `θ(X) = ⟨dπ(X), η⟩`, the symplectic
//! form `Ω(X, Y) = ⟨dπ(X), K(Y)⟩ − ⟨dπ(Y), K(X)⟩` (which equals `−dθ`; see
//! the variation tests), the evaluation map `Ψ((ξ,η), r) = η + rξ` and its
//! derivative, and pencils of lines through a fixed point.

pub mod variation;

use thiserror::Error;

use crate::numerics::VecA;

/// `|‖ξ‖ − 1|` and `|⟨ξ,η⟩|` bound enforced on constructed lines.
pub const LINE_INVARIANT_TOL: f64 = 1e-12;

/// Tangent components must be orthogonal to `ξ` within this bound.
pub const TANGENT_INVARIANT_TOL: f64 = 1e-10;

/// Two lines compare equal when `‖ξ₁−ξ₂‖ + ‖η₁−η₂‖` is below this.
pub const LINE_EQ_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum LineSpaceError {
    #[error("direction is not unit: |norm - 1| = {0:.3e}")]
    NonUnitDirection(f64),
    #[error("tangent component not orthogonal to the direction: |<v, xi>| = {0:.3e}")]
    TangentNotSplit(f64),
    #[error("tangent vectors have different base lines (deviation {0:.3e})")]
    BaseMismatch(f64),
    #[error("line misses the pencil center by {0:.3e}")]
    LineMissesCenter(f64),
    #[error("non-finite component in {0}")]
    NonFinite(&'static str),
}

/// An oriented affine line `{η + tξ}` with unit `ξ` and `η ⊥ ξ`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrientedLine {
    xi: VecA,
    eta: VecA,
}

impl OrientedLine {
    /// Build from an already-split pair; `ξ` is renormalized and `η`
    /// reprojected so the stored invariants hold to machine precision.
    pub fn new(xi: VecA, eta: VecA) -> Result<Self, LineSpaceError> {
        if !xi.is_finite() || !eta.is_finite() {
            return Err(LineSpaceError::NonFinite("oriented line"));
        }
        let dev = (xi.norm() - 1.0).abs();
        if dev >= TANGENT_INVARIANT_TOL {
            return Err(LineSpaceError::NonUnitDirection(dev));
        }
        let xi = xi.normalized();
        let eta = eta.reject_from_unit(&xi);
        Ok(OrientedLine { xi, eta })
    }

    /// The oriented line through `p` in the unit direction `v`, i.e. the
    /// pair `(v, p − ⟨p,v⟩v)`.
    pub fn from_point_direction(p: &VecA, v: &VecA) -> Result<Self, LineSpaceError> {
        let dev = (v.norm() - 1.0).abs();
        if dev >= TANGENT_INVARIANT_TOL {
            return Err(LineSpaceError::NonUnitDirection(dev));
        }
        let xi = v.normalized();
        let eta = p.reject_from_unit(&xi);
        if !eta.is_finite() {
            return Err(LineSpaceError::NonFinite("foot point"));
        }
        Ok(OrientedLine { xi, eta })
    }

    pub fn xi(&self) -> &VecA {
        &self.xi
    }

    pub fn eta(&self) -> &VecA {
        &self.eta
    }

    pub fn ambient_dim(&self) -> usize {
        self.xi.dim()
    }

    /// `Ψ((ξ,η), r) = η + rξ`: the point a signed distance `r` along the
    /// line from the foot point.
    pub fn point_at(&self, r: f64) -> VecA {
        self.eta.add_scaled(r, &self.xi)
    }

    /// The line parameter of the point on the line closest to `p`
    /// (equals `⟨p, ξ⟩`).
    pub fn parameter_of_closest(&self, p: &VecA) -> f64 {
        p.dot(&self.xi)
    }

    /// Euclidean distance from `c` to the line.
    pub fn distance_to_point(&self, c: &VecA) -> f64 {
        (c - &self.eta).reject_from_unit(&self.xi).norm()
    }

    /// Coarse equality used when matching lines across families.
    pub fn approx_eq(&self, other: &OrientedLine, tol: f64) -> bool {
        self.deviation(other) < tol
    }

    /// `‖ξ₁−ξ₂‖ + ‖η₁−η₂‖`, the deviation [`approx_eq`](Self::approx_eq)
    /// thresholds on.
    pub fn deviation(&self, other: &OrientedLine) -> f64 {
        self.xi.distance(&other.xi) + self.eta.distance(&other.eta)
    }
}

/// `Ψ((ξ,η), r) = η + rξ`.
pub fn psi(line: &OrientedLine, r: f64) -> VecA {
    line.point_at(r)
}

/// A tangent vector to the line space at `base`, stored in the
/// horizontal/vertical splitting: `hor = dπ(X)`, `ver = K(X)`, both in `ξ⊥`.
#[derive(Clone, Debug)]
pub struct SplitTangent {
    base: OrientedLine,
    hor: VecA,
    ver: VecA,
}

impl SplitTangent {
    pub fn new(base: OrientedLine, hor: VecA, ver: VecA) -> Result<Self, LineSpaceError> {
        let dh = hor.dot(base.xi()).abs();
        let dv = ver.dot(base.xi()).abs();
        if dh >= TANGENT_INVARIANT_TOL * hor.norm().max(1.0) {
            return Err(LineSpaceError::TangentNotSplit(dh));
        }
        if dv >= TANGENT_INVARIANT_TOL * ver.norm().max(1.0) {
            return Err(LineSpaceError::TangentNotSplit(dv));
        }
        Ok(SplitTangent { base, hor, ver })
    }

    /// Build from raw ambient vectors, projecting both components onto
    /// `ξ⊥`. The components of a genuine tangent already lie there; the
    /// projection only removes numerical residue (e.g. finite-difference
    /// noise along `ξ`).
    pub fn project(base: OrientedLine, hor: VecA, ver: VecA) -> SplitTangent {
        let hor = hor.reject_from_unit(base.xi());
        let ver = ver.reject_from_unit(base.xi());
        SplitTangent { base, hor, ver }
    }

    pub fn zero(base: OrientedLine) -> SplitTangent {
        let d = base.ambient_dim();
        SplitTangent {
            base,
            hor: VecA::zeros(d),
            ver: VecA::zeros(d),
        }
    }

    pub fn base(&self) -> &OrientedLine {
        &self.base
    }

    pub fn hor(&self) -> &VecA {
        &self.hor
    }

    pub fn ver(&self) -> &VecA {
        &self.ver
    }
}

/// Liouville form: `θ(X) = ⟨dπ(X), η⟩`.
///
/// The round metric of the sphere is the ambient dot product restricted to
/// tangent vectors, and the fiber coordinate at `(ξ, η)` is `η` itself.
pub fn liouville_theta(x: &SplitTangent) -> f64 {
    x.hor().dot(x.base().eta())
}

/// Symplectic form: `Ω(X,Y) = ⟨dπ(X), K(Y)⟩ − ⟨dπ(Y), K(X)⟩`.
///
/// Antisymmetric and bilinear by construction; errors when the two tangent
/// vectors do not sit over the same line.
pub fn symplectic_omega(x: &SplitTangent, y: &SplitTangent) -> Result<f64, LineSpaceError> {
    let dev = x.base().deviation(y.base());
    if dev >= LINE_EQ_TOL {
        return Err(LineSpaceError::BaseMismatch(dev));
    }
    Ok(x.hor().dot(y.ver()) - y.hor().dot(x.ver()))
}

/// Derivative of the evaluation map `Ψ` at `((ξ,η), r)` applied to
/// `X + ρ ∂/∂r`:
///
/// `dΨ = r·dπ(X) + K(X) + (ρ − θ(X))·ξ`.
pub fn d_psi(x: &SplitTangent, r: f64, rho: f64) -> VecA {
    let theta = liouville_theta(x);
    let out = x.hor().scale(r);
    let out = &out + x.ver();
    out.add_scaled(rho - theta, x.base().xi())
}

/// The set of oriented lines through a fixed center point.
#[derive(Clone, Debug)]
pub struct LinePencil {
    center: VecA,
}

impl LinePencil {
    pub fn new(center: VecA) -> Self {
        LinePencil { center }
    }

    pub fn center(&self) -> &VecA {
        &self.center
    }

    /// The pencil member with direction `xi`.
    pub fn line(&self, xi: &VecA) -> Result<OrientedLine, LineSpaceError> {
        OrientedLine::from_point_direction(&self.center, xi)
    }
}

/// Membership residual for the tangent space of a pencil: a tangent `X` at a
/// line through the center `c` is tangent to the pencil iff
/// `⟨c,ξ⟩·dπ(X) + K(X) = 0`; the returned value is the norm of that vector.
///
/// Errors when the base line misses the center by more than `1e-8`.
pub fn pencil_tangent_residual(
    pencil: &LinePencil,
    x: &SplitTangent,
) -> Result<f64, LineSpaceError> {
    let dist = x.base().distance_to_point(pencil.center());
    if dist >= 1e-8 {
        return Err(LineSpaceError::LineMissesCenter(dist));
    }
    let r = pencil.center().dot(x.base().xi());
    Ok(x.hor().scale(r).add_scaled(1.0, x.ver()).norm())
}
