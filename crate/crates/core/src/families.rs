//! Parametrized submanifolds of `R^(n+1)` carrying unit vector fields, and
//! the families of oriented lines they generate.
//!
//! A [`Chart`] is a map from a `k`-dimensional parameter box into the
//! ambient space with a differentiation backend supplying first and second
//! derivatives. A [`UnitField`] assigns a unit ambient vector to each chart
//! point. Together they form a [`LineFamily`]: the family of lines through
//! `p = map(u)` in direction `v(u)`, i.e. the map
//! `Φ_v(p) = (v, p − ⟨p,v⟩v)` into the line space.
//!
//! The module computes the derivative of `Φ_v` in the horizontal/vertical
//! splitting,
//!
//! ```text
//! dπ(dΦ_v(X)) = ∇̄_X v,      K(dΦ_v(X)) = X − ⟨X,v⟩v − ⟨p,v⟩∇̄_X v,
//! ```
//!
//! the pullback `Φ_v*Ω` (whose vanishing characterizes the families of
//! lines orthogonal to some submanifold), geodesic and Frobenius residuals
//! for tangent fields, potentials for the pulled-back Liouville form, and
//! the reconstruction of orthogonal submanifolds from isotropic families.

use std::sync::Arc;

use thiserror::Error;

use crate::grid::Grid;
use crate::line_space::{LineSpaceError, OrientedLine, SplitTangent};
use crate::numerics::{self, jet2_eval, DiffBackend, Jet2, MapCallback, Mat, NumericsError, VecA};

/// Immersion gate: smallest singular value of the chart Jacobian.
pub const IMMERSION_TOL: f64 = 1e-8;

/// Unit-norm gate for fields: `|‖v‖ − 1| < 1e-10` at sampled points.
pub const UNIT_FIELD_TOL: f64 = 1e-10;

/// Default isotropy verdict tolerance, analytic backend.
pub const ISOTROPY_TOL_ANALYTIC: f64 = 1e-7;

/// Default isotropy verdict tolerance, finite-difference backend.
pub const ISOTROPY_TOL_FD: f64 = 1e-5;

/// Finite-difference step for frame fields in the Frobenius residual.
const BRACKET_FD_STEP: f64 = 1e-4;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("parameters {0:?} outside the chart domain")]
    OutOfDomain(Vec<f64>),
    #[error("field is not tangent to the chart")]
    FieldNotTangent,
    #[error("field is not normal to the chart (residual {0:.3e})")]
    FieldNotNormal(f64),
    #[error("field is not unit: |norm - 1| = {0:.3e}")]
    FieldNotUnit(f64),
    #[error("chart/field pair mismatch: the field was built over a different chart")]
    ChartMismatch,
    #[error("chart fails the immersion check: min singular value {0:.3e}")]
    NotImmersed(f64),
    #[error("frame of v-perp is rank deficient")]
    DegenerateFrame,
    #[error("family is not isotropic: max |pullback omega| = {0:.3e} exceeds {1:.3e}")]
    NotIsotropic(f64, f64),
    #[error("focal point obstructs reconstruction at {params:?} (line parameter {r:.6})")]
    FocalObstruction { params: Vec<f64>, r: f64 },
    #[error("focal check failed: {0}")]
    FocalCheck(String),
    #[error("mixed second partials asymmetric by {0:.3e} (tolerance {1:.3e})")]
    JetAsymmetric(f64, f64),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    LineSpace(#[from] LineSpaceError),
}

/// Axis-aligned box in parameter space.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainBox {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl DomainBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        DomainBox { lo, hi }
    }

    pub fn unbounded(dim: usize) -> Self {
        DomainBox {
            lo: vec![f64::NEG_INFINITY; dim],
            hi: vec![f64::INFINITY; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn contains(&self, params: &[f64]) -> bool {
        params.len() == self.dim()
            && params
                .iter()
                .zip(self.lo.iter().zip(self.hi.iter()))
                .all(|(u, (a, b))| u >= a && u <= b)
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo
            .iter()
            .zip(self.hi.iter())
            .map(|(a, b)| 0.5 * (a + b))
            .collect()
    }
}

/// A parametrized `k`-dimensional submanifold patch of `R^(n+1)`.
pub struct Chart {
    dim: usize,
    ambient: usize,
    map: MapCallback,
    backend: DiffBackend,
    domain: DomainBox,
    tol_sym: f64,
}

impl std::fmt::Debug for Chart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Chart")
            .field("dim", &self.dim)
            .field("ambient", &self.ambient)
            .field("backend", &self.backend)
            .field("domain", &self.domain)
            .finish()
    }
}

impl Chart {
    /// Chart with analytic jets supplied by the callback.
    pub fn new_analytic<F>(dim: usize, ambient: usize, domain: DomainBox, jet: F) -> Arc<Chart>
    where
        F: Fn(&[f64]) -> Jet2 + Send + Sync + 'static,
    {
        Arc::new(Chart {
            dim,
            ambient,
            map: MapCallback::Jet(Arc::new(jet)),
            backend: DiffBackend::Analytic,
            domain,
            tol_sym: 1e-12,
        })
    }

    /// Chart differentiated by central finite differences of the value map.
    pub fn new_numeric<F>(
        dim: usize,
        ambient: usize,
        domain: DomainBox,
        rel_step: f64,
        map: F,
    ) -> Arc<Chart>
    where
        F: Fn(&[f64]) -> VecA + Send + Sync + 'static,
    {
        assert!(rel_step > 0.0, "central-difference step must be positive");
        Arc::new(Chart {
            dim,
            ambient,
            map: MapCallback::Value(Arc::new(map)),
            backend: DiffBackend::CentralFd { rel_step },
            domain,
            tol_sym: 1e-7,
        })
    }

    /// Numeric chart with a custom mixed-partial symmetry tolerance (derived
    /// charts built from noisy first derivatives need a looser gate).
    pub fn with_sym_tol(self: Arc<Chart>, tol_sym: f64) -> Arc<Chart> {
        Arc::new(Chart {
            dim: self.dim,
            ambient: self.ambient,
            map: self.map.clone(),
            backend: self.backend.clone(),
            domain: self.domain.clone(),
            tol_sym,
        })
    }

    /// Analytic chart built from a jet closure; used for derived maps (e.g.
    /// focal sheets) that assemble their own first/second derivatives.
    pub fn from_jet_closure<F>(
        dim: usize,
        ambient: usize,
        domain: DomainBox,
        tol_sym: f64,
        jet: F,
    ) -> Arc<Chart>
    where
        F: Fn(&[f64]) -> Jet2 + Send + Sync + 'static,
    {
        Arc::new(Chart {
            dim,
            ambient,
            map: MapCallback::Jet(Arc::new(jet)),
            backend: DiffBackend::Analytic,
            domain,
            tol_sym,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn domain(&self) -> &DomainBox {
        &self.domain
    }

    pub fn backend(&self) -> &DiffBackend {
        &self.backend
    }

    pub fn contains(&self, params: &[f64]) -> bool {
        self.domain.contains(params)
    }

    pub fn value(&self, params: &[f64]) -> Result<VecA, FamilyError> {
        if !self.contains(params) {
            return Err(FamilyError::OutOfDomain(params.to_vec()));
        }
        Ok(self.map.value(params))
    }

    /// Full second-order jet at `params`, symmetry-checked.
    pub fn jet(&self, params: &[f64]) -> Result<Jet2, FamilyError> {
        if !self.contains(params) {
            return Err(FamilyError::OutOfDomain(params.to_vec()));
        }
        let jet = jet2_eval(
            &self.map,
            params,
            &self.backend,
            self.domain.lo(),
            self.domain.hi(),
        )?;
        let asym = jet.mixed_asymmetry();
        let scale = jet
            .second
            .iter()
            .flatten()
            .fold(1.0_f64, |m, v| m.max(v.norm_inf()));
        if asym > self.tol_sym * scale {
            return Err(FamilyError::JetAsymmetric(asym, self.tol_sym * scale));
        }
        Ok(jet.symmetrized())
    }

    /// Columns are the coordinate tangent vectors `∂ᵢ map`.
    pub fn jacobian(&self, params: &[f64]) -> Result<Mat, FamilyError> {
        Ok(Mat::from_cols(&self.jet(params)?.first))
    }

    /// Smallest singular value of the Jacobian; the immersion gate.
    pub fn immersion_margin(&self, params: &[f64]) -> Result<f64, FamilyError> {
        Ok(self.jacobian(params)?.min_singular_value()?)
    }

    /// Assert the immersion invariant on every grid point.
    pub fn validate_immersion(&self, grid: &Grid) -> Result<(), FamilyError> {
        for p in grid.points() {
            let m = self.immersion_margin(&p)?;
            if m <= IMMERSION_TOL {
                return Err(FamilyError::NotImmersed(m));
            }
        }
        Ok(())
    }
}

/// Declared relation of a field to its chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Tangent,
    Normal,
    General,
}

/// A unit vector field over a chart, with optional analytic derivatives.
#[derive(Clone)]
pub struct UnitField {
    chart: Arc<Chart>,
    value_cb: Arc<dyn Fn(&[f64]) -> VecA + Send + Sync>,
    deriv_cb: Option<Arc<dyn Fn(&[f64]) -> Vec<VecA> + Send + Sync>>,
    kind: FieldKind,
    backend: DiffBackend,
}

impl std::fmt::Debug for UnitField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("UnitField")
            .field("kind", &self.kind)
            .field("backend", &self.backend)
            .finish()
    }
}

impl UnitField {
    pub fn from_closures<V>(
        chart: Arc<Chart>,
        kind: FieldKind,
        backend: DiffBackend,
        value: V,
        deriv: Option<Arc<dyn Fn(&[f64]) -> Vec<VecA> + Send + Sync>>,
    ) -> UnitField
    where
        V: Fn(&[f64]) -> VecA + Send + Sync + 'static,
    {
        UnitField {
            chart,
            value_cb: Arc::new(value),
            deriv_cb: deriv,
            kind,
            backend,
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn backend(&self) -> &DiffBackend {
        &self.backend
    }

    /// Field value; checked unit within [`UNIT_FIELD_TOL`].
    pub fn value(&self, params: &[f64]) -> Result<VecA, FamilyError> {
        let v = (self.value_cb)(params);
        let dev = (v.norm() - 1.0).abs();
        if dev >= UNIT_FIELD_TOL {
            return Err(FamilyError::FieldNotUnit(dev));
        }
        Ok(v)
    }

    /// `∂ᵢ v` per parameter axis (the ambient directional derivatives
    /// `∇̄_{∂ᵢ} v` since the flat connection is plain differentiation).
    pub fn first_derivs(&self, params: &[f64]) -> Result<Vec<VecA>, FamilyError> {
        match (&self.deriv_cb, &self.backend) {
            (Some(cb), DiffBackend::Analytic) => Ok(cb(params)),
            (Some(cb), DiffBackend::CentralFd { .. }) => Ok(cb(params)),
            (None, DiffBackend::Analytic) => Err(NumericsError::MissingJetCallback.into()),
            (None, DiffBackend::CentralFd { rel_step }) => {
                let steps = numerics::fd_steps(params, *rel_step);
                Ok((0..params.len())
                    .map(|i| {
                        numerics::central_first(
                            &|p: &[f64]| (self.value_cb)(p),
                            params,
                            i,
                            steps[i],
                        )
                    })
                    .collect())
            }
        }
    }

    /// Check unit norm and the declared kind on every grid point.
    pub fn validate_on(&self, grid: &Grid) -> Result<(), FamilyError> {
        for u in grid.points() {
            let v = self.value(&u)?;
            let jac = self.chart.jacobian(&u)?;
            match self.kind {
                FieldKind::Tangent => {
                    let proj = jac.project_onto_columns(&v)?;
                    if v.distance(&proj) >= 1e-8 {
                        return Err(FamilyError::FieldNotTangent);
                    }
                }
                FieldKind::Normal => {
                    for j in 0..jac.cols() {
                        let col = jac.col(j);
                        let r = v.dot(&col).abs() / col.norm().max(1e-300);
                        if r >= 1e-8 {
                            return Err(FamilyError::FieldNotNormal(r));
                        }
                    }
                }
                FieldKind::General => {}
            }
        }
        Ok(())
    }
}

/// The tangent frame of a line family at one parameter point: the images
/// `dΦ_v(∂ᵢ)` of the chart coordinate vectors, all based at the same line.
#[derive(Clone, Debug)]
pub struct FamilyTangentFrame {
    pub params: Vec<f64>,
    pub vectors: Vec<SplitTangent>,
}

/// Verdict report for the isotropy test over a grid.
#[derive(Clone, Debug)]
pub struct IsotropyReport {
    pub max_abs_omega: f64,
    pub tol: f64,
    pub verdict: bool,
    pub worst_params: Vec<f64>,
}

/// Result of reconstructing an orthogonal submanifold from an isotropic
/// family: the derived chart plus its measured normality residual.
pub struct ReconstructedOrthogonal {
    pub chart: Arc<Chart>,
    /// Max over the build grid of `|⟨ξ(u), ∂ᵢ out(u)⟩| / ‖∂ᵢ out(u)‖`.
    pub max_normality_residual: f64,
}

/// A chart together with a unit field over it: generates the line family
/// `Φ_v(S)`.
#[derive(Clone, Debug)]
pub struct LineFamily {
    chart: Arc<Chart>,
    field: UnitField,
}

impl LineFamily {
    pub fn new(chart: Arc<Chart>, field: UnitField) -> Result<Self, FamilyError> {
        if !Arc::ptr_eq(&chart, field.chart()) {
            return Err(FamilyError::ChartMismatch);
        }
        Ok(LineFamily { chart, field })
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn field(&self) -> &UnitField {
        &self.field
    }

    /// The line through `map(u)` in direction `v(u)`.
    pub fn phi(&self, params: &[f64]) -> Result<OrientedLine, FamilyError> {
        let p = self.chart.value(params)?;
        let v = self.field.value(params)?;
        Ok(OrientedLine::from_point_direction(&p, &v)?)
    }

    /// The derivative frame of `Φ_v` at `params`: for each chart direction
    /// `Xᵢ = ∂ᵢ map`,
    ///
    /// `hor = ∇̄_{Xᵢ}v`, `ver = Xᵢ − ⟨Xᵢ,v⟩v − ⟨p,v⟩∇̄_{Xᵢ}v`.
    pub fn d_phi(&self, params: &[f64]) -> Result<FamilyTangentFrame, FamilyError> {
        let jet = self.chart.jet(params)?;
        let v = self.field.value(params)?;
        let dv = self.field.first_derivs(params)?;
        let p = &jet.value;
        let line = OrientedLine::from_point_direction(p, &v)?;
        let pv = p.dot(&v);
        let vectors = (0..self.chart.dim())
            .map(|i| {
                let x = &jet.first[i];
                let ver = x.add_scaled(-x.dot(&v), &v).add_scaled(-pv, &dv[i]);
                SplitTangent::project(line.clone(), dv[i].clone(), ver)
            })
            .collect();
        Ok(FamilyTangentFrame {
            params: params.to_vec(),
            vectors,
        })
    }

    /// The pulled-back symplectic form in chart coordinates:
    /// `ω_ij = ⟨∇̄_{Xᵢ}v, Xⱼ⟩ − ⟨∇̄_{Xⱼ}v, Xᵢ⟩` (antisymmetric `k×k`).
    pub fn pullback_omega(&self, params: &[f64]) -> Result<Mat, FamilyError> {
        let jet = self.chart.jet(params)?;
        let dv = self.field.first_derivs(params)?;
        let k = self.chart.dim();
        let mut omega = Mat::zeros(k, k);
        for i in 0..k {
            for j in (i + 1)..k {
                let val = dv[i].dot(&jet.first[j]) - dv[j].dot(&jet.first[i]);
                omega[(i, j)] = val;
                omega[(j, i)] = -val;
            }
        }
        Ok(omega)
    }

    /// Default isotropy tolerance for this family's backends.
    pub fn default_isotropy_tol(&self) -> f64 {
        let analytic = self.chart.backend().is_analytic() && self.field.backend().is_analytic();
        if analytic {
            ISOTROPY_TOL_ANALYTIC
        } else {
            ISOTROPY_TOL_FD
        }
    }

    /// Isotropy verdict: true iff `max |Φ*Ω|` entry over the grid is below
    /// `tol` (defaulting per backend when `None`).
    pub fn is_isotropic(
        &self,
        grid: &Grid,
        tol: Option<f64>,
    ) -> Result<IsotropyReport, FamilyError> {
        let tol = tol.unwrap_or_else(|| self.default_isotropy_tol());
        let mut max_abs: f64 = 0.0;
        let mut worst = grid.point(0);
        for u in grid.points() {
            let omega = self.pullback_omega(&u)?;
            let m = omega.max_abs();
            if m > max_abs {
                max_abs = m;
                worst = u;
            }
        }
        Ok(IsotropyReport {
            max_abs_omega: max_abs,
            tol,
            verdict: max_abs < tol,
            worst_params: worst,
        })
    }

    /// `‖(∇̄_v v)^T‖`: the norm of the tangential part of the ambient
    /// acceleration of `v`, i.e. the intrinsic `∇_v v`. Zero exactly when
    /// the integral curves of `v` are geodesics of the submanifold.
    pub fn geodesic_residual(&self, params: &[f64]) -> Result<f64, FamilyError> {
        if self.field.kind() != FieldKind::Tangent {
            return Err(FamilyError::FieldNotTangent);
        }
        let jet = self.chart.jet(params)?;
        let jac = Mat::from_cols(&jet.first);
        let v = self.field.value(params)?;
        let coeffs = jac.least_squares(&v)?;
        let dv = self.field.first_derivs(params)?;
        let mut acc = VecA::zeros(self.chart.ambient_dim());
        for (c, d) in coeffs.iter().zip(dv.iter()) {
            acc = acc.add_scaled(*c, d);
        }
        Ok(jac.project_onto_columns(&acc)?.norm())
    }

    /// Orthonormal frame of `v⊥ ∩ T_pS` with a column order fixed at the
    /// given pivot point, so the frame varies continuously nearby.
    fn vperp_frame_order(&self, params: &[f64]) -> Result<Vec<usize>, FamilyError> {
        let jet = self.chart.jet(params)?;
        let v = self.field.value(params)?;
        let k = self.chart.dim();
        let mut rejected: Vec<VecA> = (0..k).map(|i| jet.first[i].reject_from_unit(&v)).collect();
        let mut order = Vec::new();
        for _ in 0..(k - 1) {
            let (best, norm) = rejected
                .iter()
                .enumerate()
                .filter(|(i, _)| !order.contains(i))
                .map(|(i, w)| (i, w.norm()))
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .ok_or(FamilyError::DegenerateFrame)?;
            if norm < 1e-8 {
                return Err(FamilyError::DegenerateFrame);
            }
            let e = rejected[best].normalized();
            for (i, w) in rejected.iter_mut().enumerate() {
                if i != best {
                    *w = w.reject_from_unit(&e);
                }
            }
            order.push(best);
        }
        Ok(order)
    }

    fn vperp_frame_at(&self, params: &[f64], order: &[usize]) -> Result<Vec<VecA>, FamilyError> {
        let jet = self.chart.jet(params)?;
        let v = self.field.value(params)?;
        let mut frame: Vec<VecA> = Vec::with_capacity(order.len());
        for &i in order {
            let mut w = jet.first[i].reject_from_unit(&v);
            for e in &frame {
                w = w.reject_from_unit(e);
            }
            let n = w.norm();
            if n < 1e-10 {
                return Err(FamilyError::DegenerateFrame);
            }
            frame.push(w.scale(1.0 / n));
        }
        Ok(frame)
    }

    /// Integrability residual of the distribution `v⊥`:
    /// `max_(a<b) |⟨[Ẽ_a, Ẽ_b], v⟩|` over an orthonormal frame `{Ẽ_a}` of
    /// `v⊥ ∩ T_pS`, with the Lie bracket computed as
    /// `∇̄_{Ẽ_a}Ẽ_b − ∇̄_{Ẽ_b}Ẽ_a` by first-order finite differences of the
    /// frame fields. Requires `k ≥ 2` (for `k = 2` the result is zero up to
    /// noise since a line field is always integrable).
    pub fn frobenius_residual(&self, params: &[f64]) -> Result<f64, FamilyError> {
        if self.field.kind() != FieldKind::Tangent {
            return Err(FamilyError::FieldNotTangent);
        }
        let k = self.chart.dim();
        assert!(k >= 2, "frobenius residual needs at least 2 parameters");
        let order = self.vperp_frame_order(params)?;
        let v = self.field.value(params)?;
        let jac = self.chart.jacobian(params)?;
        let frame = self.vperp_frame_at(params, &order)?;

        // Parameter-space coefficient vectors of the frame fields.
        let coeffs: Vec<Vec<f64>> = frame
            .iter()
            .map(|e| jac.least_squares(e))
            .collect::<Result<_, _>>()?;

        let frame_fn = |u: &[f64], a: usize| -> VecA {
            self.vperp_frame_at(u, &order)
                .map(|f| f[a].clone())
                .unwrap_or_else(|_| VecA::zeros(self.chart.ambient_dim()))
        };

        let mut worst: f64 = 0.0;
        for a in 0..frame.len() {
            for b in (a + 1)..frame.len() {
                let da_eb = numerics::central_directional(
                    &|u: &[f64]| frame_fn(u, b),
                    params,
                    &coeffs[a],
                    BRACKET_FD_STEP,
                );
                let db_ea = numerics::central_directional(
                    &|u: &[f64]| frame_fn(u, a),
                    params,
                    &coeffs[b],
                    BRACKET_FD_STEP,
                );
                let bracket = &da_eb - &db_ea;
                worst = worst.max(bracket.dot(&v).abs());
            }
        }
        Ok(worst)
    }

    /// Components of the pulled-back Liouville form in chart coordinates:
    /// `α_i = θ(dΦ_v(∂ᵢ)) = ⟨∇̄_{∂ᵢ}v, η⟩`.
    pub fn theta_pullback(&self, params: &[f64]) -> Result<Vec<f64>, FamilyError> {
        let frame = self.d_phi(params)?;
        Ok(frame
            .vectors
            .iter()
            .map(crate::line_space::liouville_theta)
            .collect())
    }

    /// Components of the contact 1-form `A(X) = ⟨X, v⟩` in chart
    /// coordinates. Related to the Liouville pullback by
    /// `Φ*θ = d⟨p,v⟩ − A`, so on isotropic families both are closed.
    pub fn a_form(&self, params: &[f64]) -> Result<Vec<f64>, FamilyError> {
        let jet = self.chart.jet(params)?;
        let v = self.field.value(params)?;
        Ok(jet.first.iter().map(|x| x.dot(&v)).collect())
    }

    /// Line integral of the pulled-back Liouville form along a polyline in
    /// parameter space, i.e. the potential `F` with `θ = dF` and
    /// `F(path start) = 0`. Composite 4-point Gauss–Legendre per segment.
    ///
    /// Errors with [`FamilyError::NotIsotropic`] when the pullback of `Ω`
    /// at a segment midpoint exceeds the backend tolerance (the form is not
    /// closed there, so no potential exists).
    pub fn reconstruct_potential(&self, path: &[Vec<f64>]) -> Result<f64, FamilyError> {
        self.integrate_1form(path, &|u| self.theta_pullback(u))
    }

    /// Line integral of the 1-form `A(X) = ⟨X,v⟩` along a polyline: the
    /// local distance potential `f` with `grad f` equal to the tangential
    /// part of `v` (for tangent fields, `grad f = v`). Satisfies
    /// `f = ⟨p,v⟩ − F` up to the common base-point constant.
    pub fn distance_potential(&self, path: &[Vec<f64>]) -> Result<f64, FamilyError> {
        self.integrate_1form(path, &|u| self.a_form(u))
    }

    fn integrate_1form(
        &self,
        path: &[Vec<f64>],
        form: &dyn Fn(&[f64]) -> Result<Vec<f64>, FamilyError>,
    ) -> Result<f64, FamilyError> {
        assert!(path.len() >= 2, "path needs at least two vertices");
        let iso_tol = self.default_isotropy_tol();
        // 4-point Gauss–Legendre nodes/weights on [0,1].
        const GL_X: [f64; 4] = [
            0.069_431_844_202_973_71,
            0.330_009_478_207_571_87,
            0.669_990_521_792_428_1,
            0.930_568_155_797_026_2,
        ];
        const GL_W: [f64; 4] = [
            0.173_927_422_568_726_92,
            0.326_072_577_431_273_05,
            0.326_072_577_431_273_05,
            0.173_927_422_568_726_92,
        ];
        let mut total = 0.0;
        for seg in path.windows(2) {
            let (a, b) = (&seg[0], &seg[1]);
            let delta: Vec<f64> = a.iter().zip(b.iter()).map(|(x, y)| y - x).collect();
            let len: f64 = delta.iter().map(|d| d * d).sum::<f64>().sqrt();
            if len == 0.0 {
                continue;
            }
            // Closedness check at the segment midpoint.
            let mid: Vec<f64> = a.iter().zip(b.iter()).map(|(x, y)| 0.5 * (x + y)).collect();
            let omega = self.pullback_omega(&mid)?.max_abs();
            if omega >= iso_tol {
                return Err(FamilyError::NotIsotropic(omega, iso_tol));
            }
            let panels = (len / 0.1).ceil().max(4.0) as usize;
            for panel in 0..panels {
                let t0 = panel as f64 / panels as f64;
                let dt = 1.0 / panels as f64;
                for (x, w) in GL_X.iter().zip(GL_W.iter()) {
                    let t = t0 + dt * x;
                    let u: Vec<f64> = a
                        .iter()
                        .zip(delta.iter())
                        .map(|(ai, di)| ai + t * di)
                        .collect();
                    let alpha = form(&u)?;
                    let along: f64 = alpha.iter().zip(delta.iter()).map(|(al, d)| al * d).sum();
                    total += w * dt * along;
                }
            }
        }
        Ok(total)
    }

    /// Potential value at `target` integrating from `base` along the
    /// straight parameter-space segment.
    pub fn potential_between(&self, base: &[f64], target: &[f64]) -> Result<f64, FamilyError> {
        self.reconstruct_potential(&[base.to_vec(), target.to_vec()])
    }

    /// Reconstruct the orthogonal submanifold through the line points
    /// `Ψ(Φ(u), F(u) + r0)`, where `F` is the Liouville potential with
    /// `F(base) = 0`.
    ///
    /// Requires the family to be isotropic on the grid and checks that no
    /// focal point of the family sits at the reconstruction parameter; the
    /// returned chart is numeric (central differences) over the family's
    /// domain, and the report carries the measured normality residual of
    /// the line directions against the reconstructed tangent planes.
    pub fn reconstruct_orthogonal_submanifold(
        &self,
        base: &[f64],
        r0: f64,
        grid: &Grid,
    ) -> Result<ReconstructedOrthogonal, FamilyError> {
        let report = self.is_isotropic(grid, None)?;
        if !report.verdict {
            return Err(FamilyError::NotIsotropic(report.max_abs_omega, report.tol));
        }
        // Focal obstruction check at the reconstruction parameter.
        for u in grid.points() {
            let f_here = self.potential_between(base, &u)? + r0;
            let hits = crate::focal::focal_points_generic(self, &u)
                .map_err(|e| FamilyError::FocalCheck(e.to_string()))?;
            for hit in &hits {
                if (hit.r - f_here).abs() < 1e-6 {
                    return Err(FamilyError::FocalObstruction {
                        params: u.clone(),
                        r: hit.r,
                    });
                }
            }
        }

        let fam = self.clone();
        let base_v = base.to_vec();
        let map = move |u: &[f64]| -> VecA {
            let f = fam
                .potential_between(&base_v, u)
                .expect("potential inside validated domain");
            let line = fam.phi(u).expect("line inside validated domain");
            line.point_at(f + r0)
        };
        let chart = Chart::new_numeric(
            self.chart.dim(),
            self.chart.ambient_dim(),
            self.chart.domain().clone(),
            1e-5,
            map,
        );

        let mut max_res: f64 = 0.0;
        for u in grid.points() {
            let xi = self.phi(&u)?.xi().clone();
            let jac = chart.jacobian(&u)?;
            for j in 0..jac.cols() {
                let col = jac.col(j);
                max_res = max_res.max(xi.dot(&col).abs() / col.norm().max(1e-300));
            }
        }
        Ok(ReconstructedOrthogonal {
            chart,
            max_normality_residual: max_res,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::grid::{Grid, GridAxis};
    use crate::line_space::symplectic_omega;

    fn v(c: &[f64]) -> VecA {
        VecA::from(c)
    }

    #[test]
    fn phi_on_plane_with_vertical_field() {
        // Constant field v=(0,0,1) over the z=0 plane: ξ = v, η = p.
        let s = catalog::surface("plane", &[]).unwrap();
        let fam = LineFamily::new(s.chart.clone(), s.normal_field()).unwrap();
        let line = fam.phi(&[0.7, -0.4]).unwrap();
        assert!(line.xi().distance(&v(&[0.0, 0.0, 1.0])) < 1e-14);
        assert!(line.eta().distance(&v(&[0.7, -0.4, 0.0])) < 1e-14);
    }

    #[test]
    fn phi_on_sphere_normals_passes_origin() {
        // Outward normals of the centered unit sphere: ξ = p, η = 0.
        let s = catalog::surface("sphere", &[1.0]).unwrap();
        let fam = LineFamily::new(s.chart.clone(), s.normal_field()).unwrap();
        let u = [1.2, 2.0];
        let line = fam.phi(&u).unwrap();
        let p = s.chart.value(&u).unwrap();
        assert!(line.xi().distance(&p) < 1e-12);
        assert!(line.eta().norm() < 1e-12);
    }

    #[test]
    fn phi_on_circle_tangents() {
        // Unit circle with tangent field: at t=0, ξ=(0,1,0), η=(1,0,0).
        // Realized as the equator-like latitude field at the torus center
        // circle is awkward; build the circle chart directly.
        let domain = DomainBox::new(vec![-3.0], vec![3.0]);
        let chart = Chart::new_analytic(1, 3, domain, |u| {
            let t = u[0];
            Jet2 {
                value: VecA::new(vec![t.cos(), t.sin(), 0.0]),
                first: vec![VecA::new(vec![-t.sin(), t.cos(), 0.0])],
                second: vec![vec![VecA::new(vec![-t.cos(), -t.sin(), 0.0])]],
            }
        });
        let field = catalog::coordinate_field(&chart, 0);
        let fam = LineFamily::new(chart, field).unwrap();
        let line = fam.phi(&[0.0]).unwrap();
        assert!(line.xi().distance(&v(&[0.0, 1.0, 0.0])) < 1e-12);
        assert!(line.eta().distance(&v(&[1.0, 0.0, 0.0])) < 1e-12);
    }

    #[test]
    fn d_phi_constant_field_on_plane() {
        // ∇̄v = 0: hor = 0, ver = Xᵢ − ⟨Xᵢ,v⟩v.
        let s = catalog::surface("plane", &[]).unwrap();
        let fam = LineFamily::new(s.chart.clone(), s.normal_field()).unwrap();
        let frame = fam.d_phi(&[0.2, 0.3]).unwrap();
        for (i, t) in frame.vectors.iter().enumerate() {
            assert!(t.hor().norm() < 1e-14);
            let x = if i == 0 {
                v(&[1.0, 0.0, 0.0])
            } else {
                v(&[0.0, 1.0, 0.0])
            };
            assert!(t.ver().distance(&x) < 1e-14);
        }
    }

    #[test]
    fn d_phi_sphere_normal_has_zero_vertical() {
        // ν(p) = p on the unit sphere: hor = Xᵢ, ver = Xᵢ − ⟨p,p⟩Xᵢ = 0.
        let s = catalog::surface("sphere", &[1.0]).unwrap();
        let fam = LineFamily::new(s.chart.clone(), s.normal_field()).unwrap();
        let u = [0.9, 1.4];
        let jet = s.chart.jet(&u).unwrap();
        let frame = fam.d_phi(&u).unwrap();
        for (i, t) in frame.vectors.iter().enumerate() {
            assert!(t.hor().distance(&jet.first[i]) < 1e-12);
            assert!(t.ver().norm() < 1e-12);
        }
    }

    #[test]
    fn d_phi_matches_finite_difference_curve() {
        // FD oracle: split the curve derivative of Φ(u + t·eᵢ) and compare.
        let s = catalog::surface("ellipsoid", &[1.0, 1.5, 2.0]).unwrap();
        let field = catalog::named_tangent_field("latitude", &s.chart).unwrap();
        let fam = LineFamily::new(s.chart.clone(), field).unwrap();
        let u = [1.0, 0.8];
        let frame = fam.d_phi(&u).unwrap();
        let h = 1e-6;
        for i in 0..2 {
            let mut up = u.to_vec();
            up[i] += h;
            let mut dn = u.to_vec();
            dn[i] -= h;
            let lp = fam.phi(&up).unwrap();
            let lm = fam.phi(&dn).unwrap();
            let fd_xi = (&lp.xi().clone() - lm.xi()).scale(0.5 / h);
            let fd_eta = (&lp.eta().clone() - lm.eta()).scale(0.5 / h);
            let line = fam.phi(&u).unwrap();
            // hor = dξ/dt; ver = projection of dη/dt onto ξ⊥.
            assert!(fd_xi.distance(frame.vectors[i].hor()) < 1e-6);
            let ver = fd_eta.reject_from_unit(line.xi());
            assert!(ver.distance(frame.vectors[i].ver()) < 1e-6);
        }
    }

    #[test]
    fn pullback_omega_matches_symplectic_on_frame() {
        // Φ*Ω entries equal Ω applied to the dΦ frame vectors.
        let s = catalog::surface("ellipsoid", &[1.0, 1.5, 2.0]).unwrap();
        let field = catalog::named_tangent_field("latitude", &s.chart).unwrap();
        let fam = LineFamily::new(s.chart.clone(), field).unwrap();
        let u = [1.1, 0.7];
        let omega = fam.pullback_omega(&u).unwrap();
        let frame = fam.d_phi(&u).unwrap();
        let direct = symplectic_omega(&frame.vectors[0], &frame.vectors[1]).unwrap();
        assert!((omega[(0, 1)] - direct).abs() < 1e-8);
    }

    #[test]
    fn normal_families_are_isotropic() {
        for (id, params) in [
            ("sphere", vec![1.0]),
            ("ellipsoid", vec![1.0, 1.5, 2.0]),
            ("torus", vec![2.0, 0.5]),
        ] {
            let s = catalog::surface(id, &params).unwrap();
            let fam = LineFamily::new(s.chart.clone(), s.normal_field()).unwrap();
            let grid = Grid::over_inset(s.chart.domain(), 10, 0.01);
            let report = fam.is_isotropic(&grid, None).unwrap();
            assert!(
                report.verdict,
                "{id}: max omega {:.2e}",
                report.max_abs_omega
            );
        }
    }

    #[test]
    fn latitude_family_is_not_isotropic() {
        let s = catalog::surface("sphere", &[1.0]).unwrap();
        let field = catalog::named_tangent_field("latitude", &s.chart).unwrap();
        let fam = LineFamily::new(s.chart.clone(), field).unwrap();
        let grid = Grid::over_inset(s.chart.domain(), 10, 0.01);
        let report = fam.is_isotropic(&grid, None).unwrap();
        assert!(!report.verdict);
        // Φ*Ω(∂θ, ∂φ) = cos θ on the unit sphere; at θ = π/4 it is ≈ 0.707.
        let omega = fam
            .pullback_omega(&[std::f64::consts::FRAC_PI_4, 1.0])
            .unwrap();
        assert!((omega[(0, 1)].abs() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-7);
    }

    #[test]
    fn meridian_family_is_isotropic_and_geodesic() {
        let s = catalog::surface("surface_of_revolution", &[1.0, 0.0, 0.25]).unwrap();
        let field = catalog::named_tangent_field("meridian", &s.chart).unwrap();
        let fam = LineFamily::new(s.chart.clone(), field).unwrap();
        let grid = Grid::over_inset(s.chart.domain(), 8, 0.02);
        let report = fam.is_isotropic(&grid, None).unwrap();
        assert!(report.verdict, "max omega {:.2e}", report.max_abs_omega);
        for u in grid.points() {
            assert!(fam.geodesic_residual(&u).unwrap() < 1e-8);
            // k = 2: v⊥ is a line field, integrable up to FD noise.
            assert!(fam.frobenius_residual(&u).unwrap() < 1e-6);
        }
    }

    #[test]
    fn geodesic_residual_of_latitudes() {
        // Latitude circles on the unit sphere have geodesic curvature
        // |tan(latitude)| = |cos θ / sin θ| in the polar angle θ; the
        // equator (θ = π/2) is the only geodesic latitude.
        let s = catalog::surface("sphere", &[1.0]).unwrap();
        let field = catalog::named_tangent_field("latitude", &s.chart).unwrap();
        let fam = LineFamily::new(s.chart.clone(), field).unwrap();
        let eq = fam
            .geodesic_residual(&[std::f64::consts::FRAC_PI_2, 1.0])
            .unwrap();
        assert!(eq < 1e-8, "equator residual {eq:.2e}");
        for theta in [0.6, 1.0, 1.3] {
            let res = fam.geodesic_residual(&[theta, 1.0]).unwrap();
            let expect = (theta.cos() / theta.sin()).abs();
            assert!(
                (res - expect).abs() < 1e-6,
                "residual {res} vs cot {expect} at theta {theta}"
            );
        }
        // Great circles through the poles are geodesics.
        let great = catalog::named_tangent_field("great_circle", &s.chart).unwrap();
        let fam2 = LineFamily::new(s.chart.clone(), great).unwrap();
        assert!(fam2.geodesic_residual(&[0.9, 1.2]).unwrap() < 1e-8);
    }

    #[test]
    fn field_kind_guards() {
        let s = catalog::surface("sphere", &[1.0]).unwrap();
        let fam = LineFamily::new(s.chart.clone(), s.normal_field()).unwrap();
        assert!(matches!(
            fam.geodesic_residual(&[1.0, 1.0]),
            Err(FamilyError::FieldNotTangent)
        ));
        assert!(matches!(
            fam.frobenius_residual(&[1.0, 1.0]),
            Err(FamilyError::FieldNotTangent)
        ));
    }

    fn flat_3chart_in_r4() -> Arc<Chart> {
        let domain = DomainBox::new(vec![-1.0, -1.0, -1.0], vec![1.0, 1.0, 1.0]);
        Chart::new_analytic(3, 4, domain, |u| {
            let z4 = VecA::zeros(4);
            Jet2 {
                value: VecA::new(vec![u[0], u[1], u[2], 0.0]),
                first: vec![
                    VecA::new(vec![1.0, 0.0, 0.0, 0.0]),
                    VecA::new(vec![0.0, 1.0, 0.0, 0.0]),
                    VecA::new(vec![0.0, 0.0, 1.0, 0.0]),
                ],
                second: vec![
                    vec![z4.clone(); 3],
                    vec![z4.clone(); 3],
                    vec![z4.clone(); 3],
                ],
            }
        })
    }

    #[test]
    fn frobenius_detects_contact_distribution() {
        // v ∝ (−u₂, 0, 1, 0) on a flat 3-chart: v⊥ ∩ TS is the standard
        // contact structure, nowhere integrable.
        let chart = flat_3chart_in_r4();
        let value = |u: &[f64]| -> VecA {
            let w = VecA::new(vec![-u[1], 0.0, 1.0, 0.0]);
            w.normalized()
        };
        let field = UnitField::from_closures(
            chart.clone(),
            FieldKind::Tangent,
            DiffBackend::central_fd(),
            value,
            None,
        );
        let fam = LineFamily::new(chart.clone(), field).unwrap();
        let res = fam.frobenius_residual(&[0.1, 0.3, -0.2]).unwrap();
        assert!(
            res > 0.2,
            "contact distribution looked integrable: {res:.2e}"
        );

        // Gradient of a linear height function: level sets integrate v⊥.
        let grad = catalog::gradient_field(&chart, &[0.0, 0.0, 1.0, 0.0]);
        let fam2 = LineFamily::new(chart, grad).unwrap();
        let res2 = fam2.frobenius_residual(&[0.1, 0.3, -0.2]).unwrap();
        assert!(res2 < 1e-6, "gradient field residual {res2:.2e}");
    }

    #[test]
    fn potential_on_sphere_normals_vanishes() {
        // η = 0 along every normal of the centered sphere, so Φ*θ = 0 and
        // the potential difference between any two points vanishes.
        let s = catalog::surface("sphere", &[1.0]).unwrap();
        let fam = LineFamily::new(s.chart.clone(), s.normal_field()).unwrap();
        let f = fam
            .reconstruct_potential(&[vec![0.8, 1.0], vec![1.3, 2.2]])
            .unwrap();
        assert!(f.abs() < 1e-12, "F = {f:.2e}");
    }

    #[test]
    fn meridian_potential_is_arclength_up_to_sign() {
        // The distance potential (A-form integral) equals meridian
        // arclength; the Liouville potential differs from it by ⟨p,v⟩.
        let s = catalog::surface("surface_of_revolution", &[1.0, 0.0, 0.25]).unwrap();
        let field = catalog::named_tangent_field("meridian", &s.chart).unwrap();
        let fam = LineFamily::new(s.chart.clone(), field).unwrap();
        let (z0, z1, phi) = (-0.5, 0.6, 1.0);
        let path = vec![vec![z0, phi], vec![z1, phi]];
        let f_dist = fam.distance_potential(&path).unwrap();
        // Independent arclength quadrature of the profile curve.
        let mut arc = 0.0;
        let nsteps = 4000;
        for s_i in 0..nsteps {
            let z = z0 + (z1 - z0) * (s_i as f64 + 0.5) / nsteps as f64;
            let dr = 0.5 * z; // d/dz of 1 + 0.25 z²
            arc += (1.0 + dr * dr).sqrt() * (z1 - z0) / nsteps as f64;
        }
        assert!(
            (f_dist - arc).abs() < 1e-6,
            "distance potential {f_dist} vs arclength {arc}"
        );
        // Identity F = ⟨p,v⟩ − f between the two potentials.
        let f_theta = fam.reconstruct_potential(&path).unwrap();
        let pv = |u: &[f64]| -> f64 {
            let p = s.chart.value(u).unwrap();
            let vv = fam.field().value(u).unwrap();
            p.dot(&vv)
        };
        let lhs = f_theta;
        let rhs = pv(&path[1]) - pv(&path[0]) - f_dist;
        assert!(
            (lhs - rhs).abs() < 1e-9,
            "potential identity {lhs} vs {rhs}"
        );
    }

    #[test]
    fn potential_is_path_independent_for_isotropic_families() {
        let s = catalog::surface("surface_of_revolution", &[1.0, 0.0, 0.25]).unwrap();
        let field = catalog::named_tangent_field("meridian", &s.chart).unwrap();
        let fam = LineFamily::new(s.chart.clone(), field).unwrap();
        let a = vec![-0.5, 1.0];
        let b = vec![0.5, 4.0];
        let direct = fam.reconstruct_potential(&[a.clone(), b.clone()]).unwrap();
        let detour = fam
            .reconstruct_potential(&[a.clone(), vec![0.5, 1.0], b.clone()])
            .unwrap();
        let detour2 = fam
            .reconstruct_potential(&[a, vec![-0.5, 4.0], vec![0.0, 2.5], b])
            .unwrap();
        assert!((direct - detour).abs() < 1e-5);
        assert!((direct - detour2).abs() < 1e-5);
    }

    #[test]
    fn potential_rejects_non_isotropic_families() {
        let s = catalog::surface("sphere", &[1.0]).unwrap();
        let field = catalog::named_tangent_field("latitude", &s.chart).unwrap();
        let fam = LineFamily::new(s.chart.clone(), field).unwrap();
        assert!(matches!(
            fam.reconstruct_potential(&[vec![0.8, 1.0], vec![1.2, 2.0]]),
            Err(FamilyError::NotIsotropic(_, _))
        ));
    }

    #[test]
    fn reconstruct_concentric_sphere() {
        // Sphere normal family, r0 = 0.5: the reconstruction is the
        // concentric sphere of radius 0.5.
        let s = catalog::surface("sphere", &[1.0]).unwrap();
        let fam = LineFamily::new(s.chart.clone(), s.normal_field()).unwrap();
        let grid = Grid::new(vec![GridAxis::new(0.8, 1.4, 5), GridAxis::new(0.8, 1.6, 5)]);
        let rec = fam
            .reconstruct_orthogonal_submanifold(&[1.0, 1.0], 0.5, &grid)
            .unwrap();
        for u in grid.points() {
            let p = rec.chart.value(&u).unwrap();
            assert!((p.norm() - 0.5).abs() < 1e-6, "radius {:.8}", p.norm());
        }
        assert!(rec.max_normality_residual < 1e-6);
    }

    #[test]
    fn reconstruct_parallel_plane() {
        let s = catalog::surface("plane", &[]).unwrap();
        let fam = LineFamily::new(s.chart.clone(), s.normal_field()).unwrap();
        let grid = Grid::new(vec![
            GridAxis::new(-0.5, 0.5, 5),
            GridAxis::new(-0.5, 0.5, 5),
        ]);
        let rec = fam
            .reconstruct_orthogonal_submanifold(&[0.0, 0.0], 0.7, &grid)
            .unwrap();
        for u in grid.points() {
            let p = rec.chart.value(&u).unwrap();
            assert!((p[2] - 0.7).abs() < 1e-9);
            assert!((p[0] - u[0]).abs() < 1e-9 && (p[1] - u[1]).abs() < 1e-9);
        }
    }

    #[test]
    fn reconstruct_ellipsoid_parallel_surface() {
        // Ellipsoid normal family, small offset: parallel hypersurface
        // with normality residual below 1e-6; with r0 = ⟨q₀,ν₀⟩ the
        // reconstruction recovers the source patch itself.
        let s = catalog::surface("ellipsoid", &[1.0, 1.5, 2.0]).unwrap();
        let fam = LineFamily::new(s.chart.clone(), s.normal_field()).unwrap();
        let grid = Grid::new(vec![GridAxis::new(0.9, 1.3, 5), GridAxis::new(0.6, 1.0, 5)]);
        let base = [1.1, 0.8];
        // Offset small enough to stay clear of the focal set.
        let rec = fam
            .reconstruct_orthogonal_submanifold(&base, 0.05, &grid)
            .unwrap();
        assert!(rec.max_normality_residual < 1e-6);
        // Self-reconstruction: r0 equal to the support value at the base
        // recovers the surface patch itself.
        let q0 = s.chart.value(&base).unwrap();
        let nu0 = fam.field().value(&base).unwrap();
        let rec_self = fam
            .reconstruct_orthogonal_submanifold(&base, q0.dot(&nu0), &grid)
            .unwrap();
        let mut worst: f64 = 0.0;
        for u in grid.points() {
            let a = rec_self.chart.value(&u).unwrap();
            let b = s.chart.value(&u).unwrap();
            worst = worst.max(a.distance(&b));
        }
        assert!(worst < 1e-7, "containment deviation {worst:.2e}");
    }

    #[test]
    fn reconstruction_blocked_by_focal_point() {
        // The center of the unit sphere sits at line parameter 0 from the
        // foot point (η = 0 for every normal line), so r0 = 0 would place
        // the reconstruction exactly on the focal point.
        let s = catalog::surface("sphere", &[1.0]).unwrap();
        let fam = LineFamily::new(s.chart.clone(), s.normal_field()).unwrap();
        let grid = Grid::new(vec![GridAxis::new(0.9, 1.1, 4), GridAxis::new(0.9, 1.1, 4)]);
        assert!(matches!(
            fam.reconstruct_orthogonal_submanifold(&[1.0, 1.0], 0.0, &grid),
            Err(FamilyError::FocalObstruction { .. })
        ));
    }

    #[test]
    fn theta_pullback_exterior_derivative_is_minus_omega() {
        // d(Φ*θ) = −Φ*Ω and dA = +Φ*Ω, checked by finite differences on a
        // non-isotropic family where Φ*Ω is far from zero.
        let s = catalog::surface("sphere", &[1.0]).unwrap();
        let field = catalog::named_tangent_field("latitude", &s.chart).unwrap();
        let fam = LineFamily::new(s.chart.clone(), field).unwrap();
        let u = [0.9, 1.1];
        let h = 1e-5;
        let ext = |form: &dyn Fn(&[f64]) -> Vec<f64>| -> f64 {
            let d0 = (form(&[u[0] + h, u[1]])[1] - form(&[u[0] - h, u[1]])[1]) / (2.0 * h);
            let d1 = (form(&[u[0], u[1] + h])[0] - form(&[u[0], u[1] - h])[0]) / (2.0 * h);
            d0 - d1
        };
        let omega = fam.pullback_omega(&u).unwrap()[(0, 1)];
        let d_theta = ext(&|p: &[f64]| fam.theta_pullback(p).unwrap());
        let d_a = ext(&|p: &[f64]| fam.a_form(p).unwrap());
        assert!(
            (d_theta + omega).abs() < 1e-5,
            "dθ = {d_theta}, Ω = {omega}"
        );
        assert!((d_a - omega).abs() < 1e-5, "dA = {d_a}, Ω = {omega}");
    }

    #[test]
    fn distance_potential_gradient_is_tangential_field() {
        // grad f = v for tangent isotropic fields: FD gradient of the
        // A-potential in parameters, converted to ambient via the chart.
        let s = catalog::surface("surface_of_revolution", &[1.0, 0.0, 0.25]).unwrap();
        let field = catalog::named_tangent_field("meridian", &s.chart).unwrap();
        let fam = LineFamily::new(s.chart.clone(), field).unwrap();
        let base = vec![-0.3, 0.9];
        let u = [0.4, 1.7];
        let h = 1e-5;
        let mut grad_coeffs = vec![0.0; 2];
        for i in 0..2 {
            let mut up = u.to_vec();
            up[i] += h;
            let mut dn = u.to_vec();
            dn[i] -= h;
            let fp = fam.distance_potential(&[base.clone(), up]).unwrap();
            let fm = fam.distance_potential(&[base.clone(), dn]).unwrap();
            grad_coeffs[i] = (fp - fm) / (2.0 * h);
        }
        // Convert the differential to the ambient gradient: grad = J g⁻¹ df.
        let jac = s.chart.jacobian(&u).unwrap();
        let g = jac.gram();
        let sol = g.solve(&grad_coeffs).unwrap();
        let grad = VecA::new(jac.mul_vec(&sol));
        let v_val = fam.field().value(&u).unwrap();
        assert!(
            grad.distance(&v_val) < 1e-5,
            "grad f vs v: {:.2e}",
            grad.distance(&v_val)
        );
    }
    #[test]
    fn radial_foliation_pullback_vanishes() {
        // Radial tangent lines of the concentric-circles foliation of a
        // plane patch: the field is a gradient, so the pullback of the
        // symplectic form vanishes.
        let s = catalog::surface("plane", &[]).unwrap();
        let field = catalog::radial_field(&s.chart, &[0.0, 0.0, 0.0]);
        let fam = LineFamily::new(s.chart.clone(), field).unwrap();
        let grid = Grid::new(vec![GridAxis::new(0.5, 1.8, 6), GridAxis::new(0.4, 1.9, 6)]);
        for u in grid.points() {
            let omega = fam.pullback_omega(&u).unwrap();
            assert!(
                omega.max_abs() < 1e-12,
                "omega {:.2e} at {u:?}",
                omega.max_abs()
            );
        }
    }

    #[test]
    fn straight_ruling_field_is_geodesic() {
        // A constant tangent field rules the plane by straight lines; the
        // intrinsic acceleration vanishes identically.
        let s = catalog::surface("plane", &[]).unwrap();
        let field = catalog::gradient_field(&s.chart, &[1.0, 0.0, 0.0]);
        let fam = LineFamily::new(s.chart.clone(), field).unwrap();
        assert!(fam.geodesic_residual(&[0.3, -0.8]).unwrap() < 1e-10);
    }
}
