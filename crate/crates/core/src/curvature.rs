//! Intrinsic curvature of immersed charts and the focal-sheet curvature
//! laws.
//!
//! Curvature is computed through the Gauss equation for a flat ambient
//! space: with `II` the vector-valued second fundamental form,
//!
//! ```text
//! K(X,Y) = [⟨II(X,X), II(Y,Y)⟩ − ⟨II(X,Y), II(X,Y)⟩]
//!          / [g(X,X)·g(Y,Y) − g(X,Y)²],
//! ```
//!
//! which needs one differentiation order less on an already-derived sheet
//! map than intrinsic Christoffel differences would (the test suite keeps a
//! Christoffel-based oracle for cross-checking).
//!
//! The verifiers compare two independently computed sides over a grid:
//!
//! - [`verify_sectional_law`]: sheet sectional curvature on the plane
//!   pushed from two normalized principal directions against
//!   `(ds_ij(Xᵢ) − 1)/s_ij²`, where `s_ij` is the astigmatism of the
//!   source hypersurface.
//! - [`verify_sectional_law_mu_route`]: the same law routed through the
//!   signed distance `μ` between sheets, `(dμ(v₁) − 1)/μ²`.
//! - [`verify_ricci_law`]: sheet Ricci curvature in the inherited tangent
//!   direction against the sum `Σ_{j≠i} (Xᵢ(s_ij) − 1)/s_ij²`.
//! - [`verify_e2_eigenrelation`]: the tangential derivative identity
//!   `∇_{E₂}v₁ = μ⁻¹·E₂` for the inherited frame on the sheet.
//! - [`constant_astigmatism_limit`]: on loci where `ds₁₂(X₁) ≈ 0`, the sheet's
//!   sectional curvature approaches `−1/s₁₂²` (the constant-astigmatism
//!   limit).

use std::sync::Arc;

use thiserror::Error;

use crate::families::{Chart, FamilyError, UnitField};
use crate::focal::{self, FocalError, FocalSheet};
use crate::grid::Grid;
use crate::numerics::{
    central_directional_scalar, orthonormal_complement, Jet2, Mat, NumericsError, VecA,
};

/// Relative-error denominator floor: curvatures near zero would otherwise
/// inflate relative errors.
pub const REL_ERR_FLOOR: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum CurvatureError {
    #[error("jacobian rank deficient (gram determinant {0:.3e})")]
    RankDeficient(f64),
    #[error("plane spanned by the two directions is degenerate (gram determinant {0:.3e})")]
    DegeneratePlane(f64),
    #[error("direction/completion set is not orthonormal in g (deviation {0:.3e})")]
    NotOrthonormal(f64),
    #[error("pushed plane degenerates on the sheet (gram determinant {0:.3e})")]
    PlaneDegenerateOnSheet(f64),
    #[error(transparent)]
    Focal(#[from] FocalError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// First and second fundamental forms of an immersed chart point.
#[derive(Clone, Debug)]
pub struct MetricData {
    /// First fundamental form `g_ij = ⟨∂ᵢ, ∂ⱼ⟩`.
    pub g: Mat,
    /// Chart coordinate vectors (columns).
    pub jacobian: Mat,
    /// Orthonormal frame of the normal space.
    pub normal_frame: Vec<VecA>,
    /// Per normal-frame vector: `II^α_ij = ⟨∂²ᵢⱼ, N_α⟩`.
    pub second_forms: Vec<Mat>,
}

impl MetricData {
    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    /// `g(x, y)` for coefficient vectors.
    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        let gy = self.g.mul_vec(y);
        x.iter().zip(gy.iter()).map(|(a, b)| a * b).sum()
    }

    /// Vector-valued `II(x, y)` as components in the normal frame.
    pub fn second_form(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        self.second_forms
            .iter()
            .map(|form| {
                let fy = form.mul_vec(y);
                x.iter().zip(fy.iter()).map(|(a, b)| a * b).sum()
            })
            .collect()
    }
}

/// Fundamental forms from a chart jet: metric from first derivatives,
/// normal frame from the orthogonal complement of the tangent space,
/// second form by projecting the second derivatives onto the frame.
pub fn metric_data(jet: &Jet2) -> Result<MetricData, CurvatureError> {
    let k = jet.params_dim();
    let jac = Mat::from_cols(&jet.first);
    let g = jac.gram();
    let gdet = g.det();
    if gdet <= 1e-10 {
        return Err(CurvatureError::RankDeficient(gdet));
    }
    let normal_frame = orthonormal_complement(&jet.first, jet.ambient_dim());
    let second_forms = normal_frame
        .iter()
        .map(|n| {
            let mut form = Mat::zeros(k, k);
            for i in 0..k {
                for j in 0..k {
                    form[(i, j)] = n.dot(&jet.second[i][j]);
                }
            }
            form
        })
        .collect();
    Ok(MetricData {
        g,
        jacobian: jac,
        normal_frame,
        second_forms,
    })
}

pub fn metric_data_for_chart(
    chart: &Arc<Chart>,
    params: &[f64],
) -> Result<MetricData, CurvatureError> {
    metric_data(&chart.jet(params)?)
}

pub fn metric_data_for_sheet(
    sheet: &FocalSheet,
    params: &[f64],
) -> Result<MetricData, CurvatureError> {
    metric_data(&sheet.jet(params)?)
}

/// Sectional curvature of the plane spanned by two coefficient vectors,
/// via the Gauss equation for a flat ambient space.
pub fn sectional_curvature(md: &MetricData, x: &[f64], y: &[f64]) -> Result<f64, CurvatureError> {
    let gxx = md.inner(x, x);
    let gyy = md.inner(y, y);
    let gxy = md.inner(x, y);
    let denom = gxx * gyy - gxy * gxy;
    if denom <= 1e-12 {
        return Err(CurvatureError::DegeneratePlane(denom));
    }
    let ii_xx = md.second_form(x, x);
    let ii_yy = md.second_form(y, y);
    let ii_xy = md.second_form(x, y);
    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(p, q)| p * q).sum() };
    Ok((dot(&ii_xx, &ii_yy) - dot(&ii_xy, &ii_xy)) / denom)
}

/// Ricci curvature in a unit direction: the sum of sectional curvatures of
/// the planes spanned by `x` and each completion vector. `x` must be unit
/// in `g` and the completion orthonormal in `g` and orthogonal to `x`.
pub fn ricci_in_direction(
    md: &MetricData,
    x: &[f64],
    completion: &[Vec<f64>],
) -> Result<f64, CurvatureError> {
    let tol = 1e-6;
    let dev_unit = (md.inner(x, x) - 1.0).abs();
    if dev_unit >= tol {
        return Err(CurvatureError::NotOrthonormal(dev_unit));
    }
    for (a, ea) in completion.iter().enumerate() {
        let dev = (md.inner(ea, ea) - 1.0).abs().max(md.inner(ea, x).abs());
        if dev >= tol {
            return Err(CurvatureError::NotOrthonormal(dev));
        }
        for eb in completion.iter().skip(a + 1) {
            let d = md.inner(ea, eb).abs();
            if d >= tol {
                return Err(CurvatureError::NotOrthonormal(d));
            }
        }
    }
    let mut total = 0.0;
    for e in completion {
        total += sectional_curvature(md, x, e)?;
    }
    Ok(total)
}

/// One verified grid point: the two sides and their discrepancy.
#[derive(Clone, Debug)]
pub struct CurvatureRow {
    pub params: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
}

impl CurvatureRow {
    pub fn abs_err(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }

    pub fn rel_err(&self) -> f64 {
        self.abs_err() / self.lhs.abs().max(self.rhs.abs()).max(REL_ERR_FLOOR)
    }
}

/// Grid report of a two-sided identity check.
#[derive(Clone, Debug, Default)]
pub struct CurvatureReport {
    pub rows: Vec<CurvatureRow>,
    pub max_abs_err: f64,
    pub max_rel_err: f64,
}

impl CurvatureReport {
    fn push(&mut self, row: CurvatureRow) {
        self.max_abs_err = self.max_abs_err.max(row.abs_err());
        self.max_rel_err = self.max_rel_err.max(row.rel_err());
        self.rows.push(row);
    }
}

/// Astigmatism of the source surface between the sheet indices, and its
/// derivative along the normalized principal direction of index `i`.
fn astigmatism_data(
    surface: &Arc<Chart>,
    nu: &UnitField,
    i: usize,
    j: usize,
    params: &[f64],
) -> Result<(f64, f64), CurvatureError> {
    let di = focal::principal_data(surface, nu, params, i)?;
    let dj = focal::principal_data(surface, nu, params, j)?;
    let s = di.radius - dj.radius;
    // ds_ij(X_i) by central differences of both radii along X_i.
    let h = 2e-5;
    let s_fn = |u: &[f64]| -> f64 {
        let spec = focal::shape_spectrum(surface, nu, u, None).expect("spectrum near grid");
        spec.radii[i] - spec.radii[j]
    };
    let ds = central_directional_scalar(&s_fn, params, &di.x_coeffs, h);
    Ok((s, ds))
}

/// Sheet sectional curvature on the plane of the pushed principal
/// directions against `(ds_ij(Xᵢ) − 1)/s_ij²`, per grid point.
pub fn verify_sectional_law(
    surface: &Arc<Chart>,
    nu: &UnitField,
    i: usize,
    j: usize,
    grid: &Grid,
) -> Result<CurvatureReport, CurvatureError> {
    let sheet = FocalSheet::build(surface, nu, i, grid)?;
    // Validate the partner sheet too; the law needs both sheets immersed
    // and injective.
    let _partner = FocalSheet::build(surface, nu, j, grid)?;
    let mut report = CurvatureReport::default();
    for u in grid.points() {
        let md = metric_data_for_sheet(&sheet, &u)?;
        let ci = sheet.principal(&u)?.x_coeffs;
        let cj = focal::principal_data(surface, nu, &u, j)?.x_coeffs;
        let plane_det = {
            let gxx = md.inner(&ci, &ci);
            let gyy = md.inner(&cj, &cj);
            let gxy = md.inner(&ci, &cj);
            gxx * gyy - gxy * gxy
        };
        if plane_det <= 1e-12 {
            return Err(CurvatureError::PlaneDegenerateOnSheet(plane_det));
        }
        let lhs = sectional_curvature(&md, &ci, &cj)?;
        let (s, ds) = astigmatism_data(surface, nu, i, j, &u)?;
        let rhs = (ds - 1.0) / (s * s);
        report.push(CurvatureRow {
            params: u,
            lhs,
            rhs,
        });
    }
    Ok(report)
}

/// Same law routed through the signed distance between the sheets:
/// `K(V₂, v₁) = (dμ(v₁) − 1)/μ²`, with `μ` evaluated as the direct inner
/// product between corresponding sheet points and `v₁ = −dY(Xᵢ)`.
pub fn verify_sectional_law_mu_route(
    surface: &Arc<Chart>,
    nu: &UnitField,
    i: usize,
    j: usize,
    grid: &Grid,
) -> Result<CurvatureReport, CurvatureError> {
    let sheet_i = FocalSheet::build(surface, nu, i, grid)?;
    let sheet_j = FocalSheet::build(surface, nu, j, grid)?;
    let mut report = CurvatureReport::default();
    let mu_fn = |u: &[f64]| -> f64 {
        let yi = sheet_i.value(u).expect("sheet value near grid");
        let yj = sheet_j.value(u).expect("sheet value near grid");
        let vi = sheet_i
            .v_field_raw(u)
            .expect("sheet field near grid")
            .normalized();
        (&yi - &yj).dot(&vi)
    };
    for u in grid.points() {
        let md = metric_data_for_sheet(&sheet_i, &u)?;
        // v₁ = −dY(Xᵢ), V₂ = −dY(Xⱼ): coefficient vectors are the negated
        // principal coefficients.
        let ci: Vec<f64> = sheet_i.principal(&u)?.x_coeffs.iter().map(|c| -c).collect();
        let cj: Vec<f64> = focal::principal_data(surface, nu, &u, j)?
            .x_coeffs
            .iter()
            .map(|c| -c)
            .collect();
        let lhs = sectional_curvature(&md, &cj, &ci)?;
        let mu = mu_fn(&u);
        let dmu = central_directional_scalar(&mu_fn, &u, &ci, 2e-5);
        let rhs = (dmu - 1.0) / (mu * mu);
        report.push(CurvatureRow {
            params: u,
            lhs,
            rhs,
        });
    }
    Ok(report)
}

/// Report of the Ricci-curvature law: per point, sheet Ricci in the
/// inherited direction against the astigmatism sum, plus diagnostics on
/// the inherited frame.
#[derive(Clone, Debug, Default)]
pub struct RicciReport {
    pub report: CurvatureReport,
    /// Smallest pairwise angle (radians) among the inherited `E`-frame
    /// directions before orthonormalization.
    pub min_frame_angle: f64,
}

/// `Ric(v₁, v₁) = Σ_{j≠i} (Xᵢ(s_ij) − 1)/s_ij²` on the `i`-th sheet.
pub fn verify_ricci_law(
    surface: &Arc<Chart>,
    nu: &UnitField,
    i: usize,
    grid: &Grid,
) -> Result<RicciReport, CurvatureError> {
    let k = surface.dim();
    let sheet = FocalSheet::build(surface, nu, i, grid)?;
    for j in 0..k {
        if j != i {
            let _ = FocalSheet::build(surface, nu, j, grid)?;
        }
    }
    let mut out = RicciReport {
        min_frame_angle: f64::INFINITY,
        ..Default::default()
    };
    for u in grid.points() {
        let md = metric_data_for_sheet(&sheet, &u)?;
        let ci: Vec<f64> = sheet.principal(&u)?.x_coeffs.iter().map(|c| -c).collect();
        // Normalize v₁ in g (unit up to sheet-derivative noise).
        let norm_v1 = md.inner(&ci, &ci).sqrt();
        let v1: Vec<f64> = ci.iter().map(|c| c / norm_v1).collect();

        // Inherited frame E_j = V_j − g(V_j, v₁)·v₁, then Gram–Schmidt.
        let mut raw: Vec<Vec<f64>> = Vec::new();
        for j in 0..k {
            if j == i {
                continue;
            }
            let cj: Vec<f64> = focal::principal_data(surface, nu, &u, j)?
                .x_coeffs
                .iter()
                .map(|c| -c)
                .collect();
            let along = md.inner(&cj, &v1);
            raw.push(
                cj.iter()
                    .zip(v1.iter())
                    .map(|(c, w)| c - along * w)
                    .collect(),
            );
        }
        // Frame-angle diagnostic before orthonormalization.
        for a in 0..raw.len() {
            for b in (a + 1)..raw.len() {
                let na = md.inner(&raw[a], &raw[a]).sqrt();
                let nb = md.inner(&raw[b], &raw[b]).sqrt();
                let cosang = (md.inner(&raw[a], &raw[b]) / (na * nb)).clamp(-1.0, 1.0);
                out.min_frame_angle = out.min_frame_angle.min(cosang.acos());
            }
        }
        // Gram–Schmidt in g.
        let mut completion: Vec<Vec<f64>> = Vec::new();
        for mut w in raw {
            for e in &completion {
                let along = md.inner(&w, e);
                for (wi, ei) in w.iter_mut().zip(e.iter()) {
                    *wi -= along * ei;
                }
            }
            let n = md.inner(&w, &w).sqrt();
            if n < 1e-8 {
                return Err(CurvatureError::PlaneDegenerateOnSheet(n));
            }
            completion.push(w.iter().map(|x| x / n).collect());
        }

        let lhs = ricci_in_direction(&md, &v1, &completion)?;
        let mut rhs = 0.0;
        for j in 0..k {
            if j == i {
                continue;
            }
            let (s, ds) = astigmatism_data(surface, nu, i, j, &u)?;
            rhs += (ds - 1.0) / (s * s);
        }
        out.report.push(CurvatureRow {
            params: u,
            lhs,
            rhs,
        });
    }
    Ok(out)
}

/// Per-point diagnostics of the tangential derivative identity.
#[derive(Clone, Debug)]
pub struct E2Row {
    pub params: Vec<f64>,
    pub residual: f64,
    pub e2_norm: f64,
    pub mu_plus_s: f64,
}

/// Diagnostics of the tangential derivative identity `∇_{E₂}v₁ = μ⁻¹E₂`.
#[derive(Clone, Debug)]
pub struct E2Report {
    pub rows: Vec<E2Row>,
    /// Max over grid of `‖∇_{E₂}v₁ − μ⁻¹E₂‖ / ‖E₂‖`.
    pub max_residual: f64,
    /// Min over grid of `‖E₂‖`.
    pub min_e2_norm: f64,
    /// Max over grid of `|⟨E₂, v₁⟩|`.
    pub max_e2_dot_v1: f64,
    /// Max over grid of `|μ + s_ij|` (signed distance against astigmatism).
    pub max_mu_plus_s: f64,
}

pub fn verify_e2_eigenrelation(
    surface: &Arc<Chart>,
    nu: &UnitField,
    i: usize,
    j: usize,
    grid: &Grid,
) -> Result<E2Report, CurvatureError> {
    let sheet_i = FocalSheet::build(surface, nu, i, grid)?;
    let sheet_j = FocalSheet::build(surface, nu, j, grid)?;
    let v1_fn = |u: &[f64]| -> VecA {
        sheet_i
            .v_field_raw(u)
            .expect("sheet field near grid")
            .normalized()
    };
    let mut rows: Vec<E2Row> = Vec::with_capacity(grid.len());
    let mut max_residual: f64 = 0.0;
    let mut min_e2: f64 = f64::INFINITY;
    let mut max_dot: f64 = 0.0;
    let mut max_mu_s: f64 = 0.0;
    for u in grid.points() {
        let first = sheet_i.first_derivs(&u)?;
        let jac = Mat::from_cols(&first);
        let ci = sheet_i.principal(&u)?.x_coeffs;
        let cj = focal::principal_data(surface, nu, &u, j)?.x_coeffs;
        let v1 = v1_fn(&u);
        // V₂ = −dY(Xⱼ) ambient and in parameter coefficients.
        let mut v2 = VecA::zeros(v1.dim());
        for (c, f) in cj.iter().zip(first.iter()) {
            v2 = v2.add_scaled(-c, f);
        }
        let along = v2.dot(&v1);
        let e2 = v2.add_scaled(-along, &v1);
        let e2_norm = e2.norm();
        min_e2 = min_e2.min(e2_norm);
        max_dot = max_dot.max(e2.dot(&v1).abs());

        // Parameter coefficients of E₂ = V₂ − ⟨V₂,v₁⟩v₁ with v₁ ≙ −cᵢ.
        let e2_coeffs: Vec<f64> = cj
            .iter()
            .zip(ci.iter())
            .map(|(a, b)| -a + along * b)
            .collect();
        let grad = crate::numerics::central_directional(&v1_fn, &u, &e2_coeffs, 2e-5);
        let tangential = jac.project_onto_columns(&grad)?;

        let mu = {
            let yi = sheet_i.value(&u)?;
            let yj = sheet_j.value(&u)?;
            (&yi - &yj).dot(&v1)
        };
        let s = sheet_i.radius(&u)? - sheet_j.radius(&u)?;
        max_mu_s = max_mu_s.max((mu + s).abs());

        let residual = tangential.add_scaled(-1.0 / mu, &e2).norm() / e2_norm;
        max_residual = max_residual.max(residual);
        rows.push(E2Row {
            params: u,
            residual,
            e2_norm,
            mu_plus_s: (mu + s).abs(),
        });
    }
    Ok(E2Report {
        rows,
        max_residual,
        min_e2_norm: min_e2,
        max_e2_dot_v1: max_dot,
        max_mu_plus_s: max_mu_s,
    })
}

/// A point located by [`constant_astigmatism_limit`] where the astigmatism is
/// stationary along `X₁`, with the curvature comparison there.
#[derive(Clone, Debug)]
pub struct AstigmatismStationaryPoint {
    pub params: Vec<f64>,
    pub ds: f64,
    pub sheet_curvature: f64,
    pub minus_inv_s2: f64,
}

/// Conditional constant-astigmatism check: locate grid-line crossings of
/// `ds₁₂(X₁) = 0` by bisection, and at each such point compare the sheet's
/// sectional curvature against `−1/s₁₂²`.
pub fn constant_astigmatism_limit(
    surface: &Arc<Chart>,
    nu: &UnitField,
    grid: &Grid,
    ds_tol: f64,
) -> Result<Vec<AstigmatismStationaryPoint>, CurvatureError> {
    let sheet = FocalSheet::build(surface, nu, 0, grid)?;
    let ds_at = |u: &[f64]| -> Result<f64, CurvatureError> {
        Ok(astigmatism_data(surface, nu, 0, 1, u)?.1)
    };
    let mut found: Vec<AstigmatismStationaryPoint> = Vec::new();
    let mut values: Vec<f64> = Vec::with_capacity(grid.len());
    for u in grid.points() {
        values.push(ds_at(&u)?);
    }
    for flat in 0..grid.len() {
        for axis in 0..grid.dim() {
            let Some(nb) = grid.neighbor(flat, axis, 1) else {
                continue;
            };
            if values[flat] == 0.0 || values[flat].signum() == values[nb].signum() {
                continue;
            }
            // Bisect along the segment to |ds| < ds_tol.
            let mut a = grid.point(flat);
            let mut b = grid.point(nb);
            let mut fa = values[flat];
            let mut mid = a.clone();
            for _ in 0..60 {
                mid = a.iter().zip(b.iter()).map(|(x, y)| 0.5 * (x + y)).collect();
                let fm = ds_at(&mid)?;
                if fm.abs() < ds_tol {
                    break;
                }
                if fm.signum() == fa.signum() {
                    a = mid.clone();
                    fa = fm;
                } else {
                    b = mid.clone();
                }
            }
            let ds = ds_at(&mid)?;
            if ds.abs() >= ds_tol {
                continue;
            }
            let md = metric_data_for_sheet(&sheet, &mid)?;
            let ci = sheet.principal(&mid)?.x_coeffs;
            let cj = focal::principal_data(surface, nu, &mid, 1)?.x_coeffs;
            let k_sheet = sectional_curvature(&md, &ci, &cj)?;
            let (s, _) = astigmatism_data(surface, nu, 0, 1, &mid)?;
            found.push(AstigmatismStationaryPoint {
                params: mid,
                ds,
                sheet_curvature: k_sheet,
                minus_inv_s2: -1.0 / (s * s),
            });
        }
    }
    Ok(found)
}
