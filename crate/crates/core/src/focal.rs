//! Focal points of line families and focal sheets of hypersurfaces.
//!
//! A point `Ψ(line, r)` of a line of a family is *focal* when the evaluation
//! map restricted to the family fails to be an immersion there, i.e. when
//! some nonzero tangent `X` of the family satisfies `r·dπ(X) + K(X) = 0`.
//! Expressing the tangent frame of the family in an orthonormal basis of
//! `ξ⊥` as horizontal and vertical matrices `H` and `V`, the focal
//! parameters are the values of `r` at which `M(r) = r·H + V` loses rank.
//! [`focal_points_generic`] recovers the rank-drop polynomial by Chebyshev
//! interpolation and hands it to the real root finder.
//!
//! For a strictly convex hypersurface with outward unit normal `ν`, the map
//! `X ↦ ∇̄_X ν` is the shape operator; its eigenvalues are the principal
//! curvatures `κᵢ`, the radii of curvature are `rᵢ = 1/κᵢ`, and the focal
//! points along a normal line sit at the centers of principal curvature
//! `q − rᵢ·ν(q)`. [`shape_spectrum`] computes the spectrum, the `i`-th
//! focal sheet is the image of [`FocalSheet`], ridges (critical points of
//! `rᵢ` along the `i`-th principal direction) are detected by
//! [`ridge_residual`], and [`signed_distance`] measures the oriented gap
//! between two sheets along the common normal lines.

use std::sync::Arc;

use thiserror::Error;

use crate::families::{Chart, DomainBox, FamilyError, FieldKind, LineFamily, UnitField};
use crate::grid::Grid;
use crate::line_space::OrientedLine;
use crate::numerics::{
    orthonormal_complement, orthonormalize, real_roots, sym_eigen, DiffBackend, Jet2, Mat,
    NumericsError, VecA,
};

/// Default floor on `|rᵢ − rⱼ|` below which radii count as colliding.
pub const MULTIPLICITY_FLOOR: f64 = 1e-4;

/// Default floor on `|drᵢ(unit Xᵢ)|` below which a point counts as a ridge.
pub const RIDGE_FLOOR: f64 = 1e-6;

/// Smallest principal curvature magnitude accepted as strictly convex.
pub const CONVEXITY_FLOOR: f64 = 1e-10;

/// Gate on singular values of `M(r)` when counting the kernel dimension.
///
/// Singular values come from the eigenvalues of `MᵀM`, whose resolution
/// bottoms out near `sqrt(eps)·‖M‖ ≈ 1.5e-8·‖M‖`; the gate sits above
/// that floor, and the polynomial-residual gate screens impostors.
pub const KERNEL_GATE: f64 = 1e-7;

/// Gate on the interpolated rank-drop polynomial at an accepted root,
/// relative to the largest node value.
pub const GRAM_GATE: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum FocalError {
    #[error("chart is not a hypersurface: dim {dim} in ambient {ambient}")]
    NotHypersurface { dim: usize, ambient: usize },
    #[error("field is not a normal field ({0})")]
    NonNormalField(String),
    #[error("surface not strictly convex: principal curvature {kappa:.3e} too close to zero")]
    NonConvex { kappa: f64 },
    #[error("radii of curvature collide: separation {separation:.3e} below floor {floor:.3e}")]
    MultiplicityCollision { separation: f64, floor: f64 },
    #[error("ridge point: |dr_i(X_i)| = {residual:.3e} at {params:?}")]
    RidgePoint { residual: f64, params: Vec<f64> },
    #[error("focal sheet may self-intersect: far-apart parameters map within {dist:.3e}")]
    SelfIntersectionSuspected { dist: f64 },
    #[error("family tangent frame is rank deficient (min singular value {0:.3e})")]
    DegenerateFrame(f64),
    #[error("every point along the line is focal (rank-drop polynomial vanishes identically)")]
    EverywhereFocal,
    #[error("sheets were built over different sources or grids")]
    GridMismatch,
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// One focal point along a line of a family.
#[derive(Clone, Debug)]
pub struct FocalHit {
    /// Signed parameter along the line measured from the foot point `η`,
    /// so `point = Ψ(line, r)`.
    pub r: f64,
    pub point: VecA,
    /// Estimated multiplicity of the rank-drop polynomial root (halved for
    /// the squared Gram route, so it matches the kernel dimension for
    /// clean inputs).
    pub multiplicity: usize,
    /// Number of singular values of `M(r)` below the kernel gate.
    pub kernel_dim: usize,
}

impl FocalHit {
    /// Signed offset of the focal point from the carrier point `p`,
    /// measured along the line direction: `r − ⟨p, ξ⟩`.
    pub fn offset_from(&self, line: &OrientedLine, p: &VecA) -> f64 {
        self.r - line.parameter_of_closest(p)
    }
}

/// All focal points along the family line at `params`.
///
/// With `H`/`V` the horizontal/vertical frame matrices in an orthonormal
/// basis of `ξ⊥`, the rank-drop polynomial of `M(r) = r·H + V` is `det M`
/// when `M` is square (`k = n`) and the Gram determinant `det(MᵀM)`
/// otherwise. Either is recovered exactly from `2k+1` Chebyshev nodes over
/// the scene bracket `[−10·diam, 10·diam]` and passed to the root finder;
/// accepted roots must pass both the polynomial-residual gate and the
/// singular-value gate on `M(r)`.
pub fn focal_points_generic(fam: &LineFamily, params: &[f64]) -> Result<Vec<FocalHit>, FocalError> {
    let k = fam.chart().dim();
    let ambient = fam.chart().ambient_dim();
    let n = ambient - 1;
    if k > n {
        // A family of dimension above n meets the focal criterion at every
        // parameter along the line.
        return Err(FocalError::EverywhereFocal);
    }
    let frame = fam.d_phi(params)?;
    let line = frame.vectors[0].base().clone();

    // Frame rank gate on the stacked horizontal/vertical components.
    let stacked: Vec<VecA> = frame
        .vectors
        .iter()
        .map(|t| {
            let mut comps: Vec<f64> = t.hor().as_slice().to_vec();
            comps.extend_from_slice(t.ver().as_slice());
            VecA::new(comps)
        })
        .collect();
    let sigma_min = Mat::from_cols(&stacked).min_singular_value()?;
    if sigma_min <= 1e-8 {
        return Err(FocalError::DegenerateFrame(sigma_min));
    }

    // Frame components in an orthonormal basis of ξ⊥.
    let basis = orthonormal_complement(&[line.xi().clone()], ambient);
    debug_assert_eq!(basis.len(), n);
    let mut h = Mat::zeros(n, k);
    let mut v = Mat::zeros(n, k);
    for (i, t) in frame.vectors.iter().enumerate() {
        for (a, b) in basis.iter().enumerate() {
            h[(a, i)] = b.dot(t.hor());
            v[(a, i)] = b.dot(t.ver());
        }
    }

    let m_at = |r: f64| -> Mat {
        let mut m = Mat::zeros(n, k);
        for a in 0..n {
            for i in 0..k {
                m[(a, i)] = r * h[(a, i)] + v[(a, i)];
            }
        }
        m
    };
    let square = k == n;
    let gram_value = |r: f64| -> f64 {
        let m = m_at(r);
        if square {
            m.det()
        } else {
            m.gram().det()
        }
    };

    // Scene bracket and Chebyshev nodes in the scaled variable t = r / L.
    let p_src = fam.chart().value(params)?;
    let bracket = 10.0 * p_src.norm().max(1.0);
    let nodes = 2 * k + 1;
    let mut ts = Vec::with_capacity(nodes);
    let mut ys = Vec::with_capacity(nodes);
    for j in 0..nodes {
        let t = ((2 * j + 1) as f64 * std::f64::consts::PI / (2 * nodes) as f64).cos();
        ts.push(t);
        ys.push(gram_value(bracket * t));
    }
    let y_max = ys.iter().fold(0.0_f64, |m, y| m.max(y.abs()));
    if y_max < 1e-300 {
        return Err(FocalError::EverywhereFocal);
    }
    // Scene scale of M itself, for the kernel gate: at a hit where M(r)
    // collapses entirely (all curvature centers coincide) the norm of
    // M(r) is no usable reference.
    let node_scale = (0..nodes)
        .map(|j| m_at(bracket * ts[j]).frobenius_norm())
        .fold(0.0_f64, f64::max)
        .max(1e-300);
    let ys_scaled: Vec<f64> = ys.iter().map(|y| y / y_max).collect();
    let mut coeffs = newton_interpolation_coeffs(&ts, &ys_scaled);
    // The rank-drop polynomial has a known degree bound (k for the square
    // determinant, 2k for the Gram route); anything above it is
    // interpolation noise and would fabricate far-away roots.
    let degree_bound = if square { k } else { 2 * k };
    for c in coeffs.iter_mut().skip(degree_bound + 1) {
        *c = 0.0;
    }
    if coeffs.iter().all(|c| c.abs() < 1e-12) {
        return Err(FocalError::EverywhereFocal);
    }

    let roots = match real_roots(&coeffs) {
        Ok(r) => r,
        Err(NumericsError::ZeroPolynomial) => return Err(FocalError::EverywhereFocal),
        Err(e) => return Err(e.into()),
    };

    let mut hits = Vec::new();
    for root in roots {
        let r = bracket * root.root;
        // Double gate: fresh polynomial value and rank drop of M(r).
        if gram_value(r).abs() > GRAM_GATE * y_max {
            continue;
        }
        let m = m_at(r);
        let mfro = m.frobenius_norm();
        let kernel_dim = if mfro < KERNEL_GATE * node_scale {
            // M(r) vanished wholesale against the scene scale: every
            // direction collapses (all curvature centers coincide).
            k
        } else {
            m.singular_values()?
                .iter()
                .filter(|s| **s < KERNEL_GATE * mfro)
                .count()
        };
        if kernel_dim == 0 {
            continue;
        }
        let multiplicity = if square {
            root.multiplicity
        } else {
            root.multiplicity.div_ceil(2)
        };
        hits.push(FocalHit {
            r,
            point: line.point_at(r),
            multiplicity: multiplicity.max(1),
            kernel_dim,
        });
    }
    hits.sort_by(|a, b| a.r.partial_cmp(&b.r).unwrap());
    Ok(hits)
}

/// Coefficients (ascending) of the interpolating polynomial through
/// `(xs[i], ys[i])` via Newton divided differences.
fn newton_interpolation_coeffs(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut divided = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            divided[i] = (divided[i] - divided[i - 1]) / (xs[i] - xs[i - level]);
        }
    }
    // Expand the Newton form into monomial coefficients, highest term first.
    let mut coeffs = vec![0.0; n];
    for i in (0..n).rev() {
        // coeffs ← coeffs·(x − xs[i]) + divided[i]
        for j in (1..n).rev() {
            coeffs[j] = coeffs[j - 1] - xs[i] * coeffs[j];
        }
        coeffs[0] = divided[i] - xs[i] * coeffs[0];
        if i == 0 {
            break;
        }
    }
    coeffs
}

/// Curvature data of a hypersurface point: radii of curvature (ascending),
/// unit principal directions, and degeneracy flags.
#[derive(Clone, Debug)]
pub struct ShapeSpectrum {
    pub params: Vec<f64>,
    /// Radii of curvature `rᵢ = 1/κᵢ`, ascending.
    pub radii: Vec<f64>,
    /// Principal curvatures paired with `radii`.
    pub kappas: Vec<f64>,
    /// Unit principal directions (ambient vectors) paired with `radii`.
    pub directions: Vec<VecA>,
    /// Parameter-space coefficients of each direction in the chart basis.
    pub coeffs: Vec<Vec<f64>>,
    /// `min_{i≠j} |rᵢ − rⱼ|`.
    pub separation: f64,
    pub multiplicity_collision: bool,
    pub strictly_convex: bool,
}

/// Shape operator spectrum of a hypersurface with unit normal field.
///
/// The operator `X ↦ ∇̄_X ν` is assembled in an orthonormal tangent frame
/// and diagonalized. Eigenvalues within [`CONVEXITY_FLOOR`] of zero signal
/// an infinite radius and error as [`FocalError::NonConvex`]; radii
/// separations under the floor (default [`MULTIPLICITY_FLOOR`]) only set
/// the collision flag, and downstream consumers decide whether to reject.
pub fn shape_spectrum(
    surface: &Arc<Chart>,
    nu: &UnitField,
    params: &[f64],
    floor: Option<f64>,
) -> Result<ShapeSpectrum, FocalError> {
    let floor = floor.unwrap_or(MULTIPLICITY_FLOOR);
    let k = surface.dim();
    let ambient = surface.ambient_dim();
    if k + 1 != ambient {
        return Err(FocalError::NotHypersurface { dim: k, ambient });
    }
    if nu.kind() != FieldKind::Normal {
        return Err(FocalError::NonNormalField(format!(
            "field kind is {:?}",
            nu.kind()
        )));
    }
    let jet = surface.jet(params)?;
    let dnu = nu.first_derivs(params)?;
    let jac = Mat::from_cols(&jet.first);

    // Orthonormal tangent frame and its parameter coefficients.
    let frame = orthonormalize(&jet.first, 1e-10);
    if frame.len() != k {
        return Err(FocalError::DegenerateFrame(0.0));
    }
    let frame_coeffs: Vec<Vec<f64>> = frame
        .iter()
        .map(|e| jac.least_squares(e))
        .collect::<Result<_, _>>()
        .map_err(FocalError::Numerics)?;

    // Shape operator S_ab = ⟨∇̄_{e_a} ν, e_b⟩; symmetric for normal fields.
    let mut shape = Mat::zeros(k, k);
    for a in 0..k {
        let mut d = VecA::zeros(ambient);
        for (c, dn) in frame_coeffs[a].iter().zip(dnu.iter()) {
            d = d.add_scaled(*c, dn);
        }
        for (b, e) in frame.iter().enumerate() {
            shape[(a, b)] = d.dot(e);
        }
    }
    let skew = shape.asymmetry();
    if skew > 1e-7 * shape.max_abs().max(1.0) {
        return Err(FocalError::NonNormalField(format!(
            "shape operator asymmetric by {skew:.3e}"
        )));
    }
    for a in 0..k {
        for b in (a + 1)..k {
            let s = 0.5 * (shape[(a, b)] + shape[(b, a)]);
            shape[(a, b)] = s;
            shape[(b, a)] = s;
        }
    }

    let eig = sym_eigen(&shape)?;
    for kappa in &eig.values {
        if kappa.abs() < CONVEXITY_FLOOR {
            return Err(FocalError::NonConvex { kappa: *kappa });
        }
    }
    // Order by radius ascending.
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        (1.0 / eig.values[a])
            .partial_cmp(&(1.0 / eig.values[b]))
            .unwrap()
    });
    let mut radii = Vec::with_capacity(k);
    let mut kappas = Vec::with_capacity(k);
    let mut directions = Vec::with_capacity(k);
    let mut coeffs = Vec::with_capacity(k);
    for &idx in &order {
        let kappa = eig.values[idx];
        radii.push(1.0 / kappa);
        kappas.push(kappa);
        let mut dir = VecA::zeros(ambient);
        let mut coef = vec![0.0; k];
        for a in 0..k {
            let w = eig.vectors[(a, idx)];
            dir = dir.add_scaled(w, &frame[a]);
            for (ci, fc) in coef.iter_mut().zip(frame_coeffs[a].iter()) {
                *ci += w * fc;
            }
        }
        directions.push(dir);
        coeffs.push(coef);
    }
    let mut separation = f64::INFINITY;
    for i in 0..k {
        for j in (i + 1)..k {
            separation = separation.min((radii[i] - radii[j]).abs());
        }
    }
    Ok(ShapeSpectrum {
        params: params.to_vec(),
        strictly_convex: kappas.iter().all(|x| *x > 0.0),
        multiplicity_collision: separation < floor,
        radii,
        kappas,
        directions,
        coeffs,
        separation,
    })
}

/// Radius function `u ↦ rᵢ(u)` (index in the ascending order).
fn radius_at(
    surface: &Arc<Chart>,
    nu: &UnitField,
    params: &[f64],
    index: usize,
    floor: Option<f64>,
) -> Result<f64, FocalError> {
    Ok(shape_spectrum(surface, nu, params, floor)?.radii[index])
}

/// Directional derivative of `rᵢ` along a parameter direction, central.
fn radius_derivative(
    surface: &Arc<Chart>,
    nu: &UnitField,
    params: &[f64],
    index: usize,
    dir: &[f64],
    floor: Option<f64>,
) -> Result<f64, FocalError> {
    radius_derivative_with_step(surface, nu, params, index, dir, floor, 1e-5)
}

fn radius_derivative_with_step(
    surface: &Arc<Chart>,
    nu: &UnitField,
    params: &[f64],
    index: usize,
    dir: &[f64],
    floor: Option<f64>,
    rel_step: f64,
) -> Result<f64, FocalError> {
    let dir_norm: f64 = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
    let h =
        rel_step * (1.0 + params.iter().fold(0.0_f64, |m, u| m.max(u.abs()))) / dir_norm.max(1e-12);
    let plus: Vec<f64> = params.iter().zip(dir).map(|(u, d)| u + h * d).collect();
    let minus: Vec<f64> = params.iter().zip(dir).map(|(u, d)| u - h * d).collect();
    let rp = radius_at(surface, nu, &plus, index, floor)?;
    let rm = radius_at(surface, nu, &minus, index, floor)?;
    Ok((rp - rm) / (2.0 * h))
}

/// `|drᵢ(Xᵢ)|` for the unit principal direction `Xᵢ`; values below
/// [`RIDGE_FLOOR`] flag a ridge point (there the normalized principal field
/// does not exist and the focal sheet is not immersed).
pub fn ridge_residual(
    surface: &Arc<Chart>,
    nu: &UnitField,
    params: &[f64],
    index: usize,
) -> Result<f64, FocalError> {
    let spec = shape_spectrum(surface, nu, params, None)?;
    if spec.multiplicity_collision {
        return Err(FocalError::MultiplicityCollision {
            separation: spec.separation,
            floor: MULTIPLICITY_FLOOR,
        });
    }
    let d = radius_derivative(surface, nu, params, index, &spec.coeffs[index], None)?;
    Ok(d.abs())
}

/// Principal data at one point: the unit direction and its rescaling to
/// `drᵢ(Xᵢ) = 1`.
///
/// The normalized field is sign-canonical: flipping the unit eigenvector
/// flips `drᵢ` with it, leaving the quotient unchanged.
pub struct PrincipalData {
    pub radius: f64,
    pub unit_dir: VecA,
    /// `Xᵢ = unit_dir / drᵢ(unit_dir)`.
    pub x_normalized: VecA,
    /// Parameter coefficients of `x_normalized` in the chart basis.
    pub x_coeffs: Vec<f64>,
    /// `drᵢ(unit_dir)`.
    pub dr_unit: f64,
}

pub fn principal_data(
    surface: &Arc<Chart>,
    nu: &UnitField,
    params: &[f64],
    index: usize,
) -> Result<PrincipalData, FocalError> {
    let spec = shape_spectrum(surface, nu, params, None)?;
    if spec.multiplicity_collision {
        return Err(FocalError::MultiplicityCollision {
            separation: spec.separation,
            floor: MULTIPLICITY_FLOOR,
        });
    }
    let dr = radius_derivative(surface, nu, params, index, &spec.coeffs[index], None)?;
    if dr.abs() < RIDGE_FLOOR {
        return Err(FocalError::RidgePoint {
            residual: dr.abs(),
            params: params.to_vec(),
        });
    }
    let x_normalized = spec.directions[index].scale(1.0 / dr);
    let x_coeffs = spec.coeffs[index].iter().map(|c| c / dr).collect();
    Ok(PrincipalData {
        radius: spec.radii[index],
        unit_dir: spec.directions[index].clone(),
        x_normalized,
        x_coeffs,
        dr_unit: dr,
    })
}

/// The principal field over a grid with a globally consistent sign for the
/// unit directions, propagated outward from the first grid point by
/// nearest-neighbor alignment.
#[derive(Clone, Debug)]
pub struct PrincipalField {
    pub index: usize,
    pub grid: Grid,
    /// Sign-aligned unit principal directions in grid order.
    pub unit_dirs: Vec<VecA>,
    /// Normalized fields `Xᵢ` (`drᵢ(Xᵢ) = 1`) in grid order.
    pub normalized: Vec<VecA>,
}

pub fn principal_field(
    surface: &Arc<Chart>,
    nu: &UnitField,
    index: usize,
    grid: &Grid,
) -> Result<PrincipalField, FocalError> {
    let mut unit_dirs: Vec<VecA> = Vec::with_capacity(grid.len());
    let mut normalized = Vec::with_capacity(grid.len());
    for u in grid.points() {
        let data = principal_data(surface, nu, &u, index)?;
        unit_dirs.push(data.unit_dir);
        normalized.push(data.x_normalized);
    }
    // Breadth-first sign alignment from the first grid point.
    let mut fixed = vec![false; grid.len()];
    let mut queue = std::collections::VecDeque::new();
    fixed[0] = true;
    queue.push_back(0usize);
    while let Some(at) = queue.pop_front() {
        for axis in 0..grid.dim() {
            for step in [-1isize, 1] {
                if let Some(nb) = grid.neighbor(at, axis, step) {
                    if !fixed[nb] {
                        if unit_dirs[nb].dot(&unit_dirs[at]) < 0.0 {
                            unit_dirs[nb] = unit_dirs[nb].scale(-1.0);
                        }
                        fixed[nb] = true;
                        queue.push_back(nb);
                    }
                }
            }
        }
    }
    Ok(PrincipalField {
        index,
        grid: grid.clone(),
        unit_dirs,
        normalized,
    })
}

struct SheetInner {
    source: Arc<Chart>,
    nu: UnitField,
    index: usize,
    grid: Grid,
    floor: f64,
    /// Relative step for the radius-derivative differences.
    dr_step: f64,
    /// Relative step for the second-derivative differences of the sheet.
    second_step: f64,
}

/// The focal sheet `u ↦ Y(u) = q(u) − rᵢ(u)·ν(u)` of a hypersurface,
/// validated on a grid (multiplicity-1, ridge-free, injectivity heuristic)
/// at build time.
///
/// First derivatives use the closed form
/// `dY(X) = X − drᵢ(X)ν − rᵢ∇̄_X ν` (with `drᵢ` by central differences of
/// the radius function); second derivatives are central differences of the
/// first.
#[derive(Clone)]
pub struct FocalSheet {
    inner: Arc<SheetInner>,
}

impl FocalSheet {
    pub fn build(
        surface: &Arc<Chart>,
        nu: &UnitField,
        index: usize,
        grid: &Grid,
    ) -> Result<FocalSheet, FocalError> {
        Self::build_with_steps(surface, nu, index, grid, 1e-5, 1e-3)
    }

    /// Build with explicit relative finite-difference steps: `dr_step` for
    /// the radius derivatives inside the first-derivative formula and
    /// `second_step` for the sheet's second derivatives. Exposed so
    /// convergence-order studies can refine both.
    pub fn build_with_steps(
        surface: &Arc<Chart>,
        nu: &UnitField,
        index: usize,
        grid: &Grid,
        dr_step: f64,
        second_step: f64,
    ) -> Result<FocalSheet, FocalError> {
        let floor = MULTIPLICITY_FLOOR;
        let mut images: Vec<VecA> = Vec::with_capacity(grid.len());
        for u in grid.points() {
            let spec = shape_spectrum(surface, nu, &u, Some(floor))?;
            if spec.multiplicity_collision {
                return Err(FocalError::MultiplicityCollision {
                    separation: spec.separation,
                    floor,
                });
            }
            let ridge = ridge_residual(surface, nu, &u, index)?;
            if ridge <= RIDGE_FLOOR {
                return Err(FocalError::RidgePoint {
                    residual: ridge,
                    params: u.clone(),
                });
            }
            let nu_v = nu.value(&u)?;
            images.push(surface.value(&u)?.add_scaled(-spec.radii[index], &nu_v));
        }
        // Injectivity heuristic: far-apart parameters must not land on the
        // same image point.
        let far = 2.0 * grid.axes().iter().map(|a| a.step()).fold(0.0_f64, f64::max);
        let pts: Vec<Vec<f64>> = grid.points().collect();
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                let dp: f64 = pts[i]
                    .iter()
                    .zip(pts[j].iter())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                if dp > far {
                    let di = images[i].distance(&images[j]);
                    if di < 1e-6 {
                        return Err(FocalError::SelfIntersectionSuspected { dist: di });
                    }
                }
            }
        }
        Ok(FocalSheet {
            inner: Arc::new(SheetInner {
                source: surface.clone(),
                nu: nu.clone(),
                index,
                grid: grid.clone(),
                floor,
                dr_step,
                second_step,
            }),
        })
    }

    pub fn source(&self) -> &Arc<Chart> {
        &self.inner.source
    }

    pub fn normal(&self) -> &UnitField {
        &self.inner.nu
    }

    pub fn index(&self) -> usize {
        self.inner.index
    }

    pub fn grid(&self) -> &Grid {
        &self.inner.grid
    }

    /// `Y(u) = q(u) − rᵢ(u)·ν(u)`.
    pub fn value(&self, params: &[f64]) -> Result<VecA, FocalError> {
        let spec = shape_spectrum(
            &self.inner.source,
            &self.inner.nu,
            params,
            Some(self.inner.floor),
        )?;
        let nu_v = self.inner.nu.value(params)?;
        Ok(self
            .inner
            .source
            .value(params)?
            .add_scaled(-spec.radii[self.inner.index], &nu_v))
    }

    pub fn radius(&self, params: &[f64]) -> Result<f64, FocalError> {
        radius_at(
            &self.inner.source,
            &self.inner.nu,
            params,
            self.inner.index,
            Some(self.inner.floor),
        )
    }

    /// First derivatives `dY(∂ⱼ)` via the closed form.
    pub fn first_derivs(&self, params: &[f64]) -> Result<Vec<VecA>, FocalError> {
        let src = &self.inner.source;
        let nu = &self.inner.nu;
        let idx = self.inner.index;
        let jet = src.jet(params)?;
        let spec = shape_spectrum(src, nu, params, Some(self.inner.floor))?;
        let nu_v = nu.value(params)?;
        let dnu = nu.first_derivs(params)?;
        let r = spec.radii[idx];
        let k = src.dim();
        let mut out = Vec::with_capacity(k);
        for j in 0..k {
            let mut axis = vec![0.0; k];
            axis[j] = 1.0;
            let dr = radius_derivative_with_step(
                src,
                nu,
                params,
                idx,
                &axis,
                Some(self.inner.floor),
                self.inner.dr_step,
            )?;
            let dy = jet.first[j].add_scaled(-dr, &nu_v).add_scaled(-r, &dnu[j]);
            out.push(dy);
        }
        Ok(out)
    }

    /// Full jet of the sheet map: value, closed-form first derivatives, and
    /// second derivatives by central differences of the first.
    pub fn jet(&self, params: &[f64]) -> Result<Jet2, FocalError> {
        let value = self.value(params)?;
        let first = self.first_derivs(params)?;
        let k = first.len();
        let ambient = value.dim();
        let mut second = vec![vec![VecA::zeros(ambient); k]; k];
        for a in 0..k {
            let h = self.inner.second_step * (1.0 + params[a].abs());
            let mut plus = params.to_vec();
            plus[a] += h;
            let mut minus = params.to_vec();
            minus[a] -= h;
            let fp = self.first_derivs(&plus)?;
            let fm = self.first_derivs(&minus)?;
            for b in 0..k {
                second[a][b] = (&fp[b] - &fm[b]).scale(0.5 / h);
            }
        }
        for a in 0..k {
            for b in (a + 1)..k {
                let avg = (&second[a][b] + &second[b][a]).scale(0.5);
                second[a][b] = avg.clone();
                second[b][a] = avg;
            }
        }
        Ok(Jet2 {
            value,
            first,
            second,
        })
    }

    /// Principal data of the source surface for this sheet's index.
    pub fn principal(&self, params: &[f64]) -> Result<PrincipalData, FocalError> {
        principal_data(&self.inner.source, &self.inner.nu, params, self.inner.index)
    }

    /// `vᵢ(u) = −dY(Xᵢ)` — the unit tangent field the sheet inherits from
    /// the normal lines (equals `ν(u)` up to numerical residue).
    pub fn v_field_raw(&self, params: &[f64]) -> Result<VecA, FocalError> {
        let data = self.principal(params)?;
        let first = self.first_derivs(params)?;
        let mut dy = VecA::zeros(first[0].dim());
        for (c, f) in data.x_coeffs.iter().zip(first.iter()) {
            dy = dy.add_scaled(*c, f);
        }
        Ok(dy.scale(-1.0))
    }

    /// The sheet as a chart over the source parameter domain (inset so the
    /// sheet's interior difference stencils stay inside the source domain).
    pub fn as_chart(&self) -> Arc<Chart> {
        let sheet = self.clone();
        let src_domain = self.inner.source.domain();
        let inset = 0.02;
        let domain = DomainBox::new(
            src_domain.lo().iter().map(|x| x + inset).collect(),
            src_domain.hi().iter().map(|x| x - inset).collect(),
        );
        Chart::from_jet_closure(
            self.inner.source.dim(),
            self.inner.source.ambient_dim(),
            domain,
            1e-3,
            move |u| sheet.jet(u).expect("sheet jet inside validated domain"),
        )
    }
}

/// The unit tangent field `vᵢ = −dY(Xᵢ)` over the sheet chart, kind
/// `Tangent`, with central-difference derivatives. Returns the sheet chart
/// alongside so the pair can form a [`LineFamily`].
pub fn tangent_field_on_sheet(sheet: &FocalSheet) -> Result<(Arc<Chart>, UnitField), FocalError> {
    let chart = sheet.as_chart();
    let inner = sheet.clone();
    let value = move |u: &[f64]| -> VecA {
        inner
            .v_field_raw(u)
            .expect("sheet field inside validated domain")
            .normalized()
    };
    let field = UnitField::from_closures(
        chart.clone(),
        FieldKind::Tangent,
        DiffBackend::CentralFd { rel_step: 3e-5 },
        value,
        None,
    );
    Ok((chart, field))
}

/// Astigmatism `s_ij = rᵢ − rⱼ` sampled over a grid. Off-diagonal values
/// must clear the multiplicity floor everywhere.
#[derive(Clone, Debug)]
pub struct AstigmatismField {
    pub i: usize,
    pub j: usize,
    pub values: Vec<f64>,
}

pub fn astigmatism(
    surface: &Arc<Chart>,
    nu: &UnitField,
    i: usize,
    j: usize,
    grid: &Grid,
    floor: Option<f64>,
) -> Result<AstigmatismField, FocalError> {
    let floor = floor.unwrap_or(MULTIPLICITY_FLOOR);
    let mut values = Vec::with_capacity(grid.len());
    for u in grid.points() {
        let spec = shape_spectrum(surface, nu, &u, Some(floor))?;
        let s = spec.radii[i] - spec.radii[j];
        if i != j && s.abs() <= floor {
            return Err(FocalError::MultiplicityCollision {
                separation: s.abs(),
                floor,
            });
        }
        values.push(s);
    }
    Ok(AstigmatismField { i, j, values })
}

/// Signed distance between corresponding points of two focal sheets of the
/// same surface, sampled over their common grid.
///
/// Carries both evaluations: the direct inner product
/// `⟨Yᵢ(q) − Yⱼ(q), vᵢ(Yᵢ(q))⟩` (with `vᵢ` the sheet's tangent field) and
/// the radii difference `−s_ij = rⱼ − rᵢ`; they agree to `1e-8` on
/// hypersurface scenarios.
#[derive(Clone, Debug)]
pub struct SignedDistance {
    pub i: usize,
    pub j: usize,
    /// Direct evaluations `μ_ij ∘ Yᵢ` in grid order.
    pub values: Vec<f64>,
    /// `−s_ij` from the radii difference, in grid order.
    pub minus_astigmatism: Vec<f64>,
}

pub fn signed_distance(
    sheet_i: &FocalSheet,
    sheet_j: &FocalSheet,
) -> Result<SignedDistance, FocalError> {
    if !Arc::ptr_eq(sheet_i.source(), sheet_j.source()) || sheet_i.grid() != sheet_j.grid() {
        return Err(FocalError::GridMismatch);
    }
    let grid = sheet_i.grid().clone();
    let mut values = Vec::with_capacity(grid.len());
    let mut minus_astig = Vec::with_capacity(grid.len());
    for u in grid.points() {
        let yi = sheet_i.value(&u)?;
        let yj = sheet_j.value(&u)?;
        let vi = sheet_i.v_field_raw(&u)?.normalized();
        values.push((&yi - &yj).dot(&vi));
        minus_astig.push(sheet_j.radius(&u)? - sheet_i.radius(&u)?);
    }
    Ok(SignedDistance {
        i: sheet_i.index(),
        j: sheet_j.index(),
        values,
        minus_astigmatism: minus_astig,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::grid::GridAxis;

    #[test]
    fn newton_interpolation_recovers_polynomial() {
        // p(t) = 2 − t + 3t² − 0.5t⁴ at 5 Chebyshev nodes.
        let p = |t: f64| 2.0 - t + 3.0 * t * t - 0.5 * t.powi(4);
        let xs: Vec<f64> = (0..5)
            .map(|j| ((2 * j + 1) as f64 * std::f64::consts::PI / 10.0).cos())
            .collect();
        let ys: Vec<f64> = xs.iter().map(|&x| p(x)).collect();
        let c = newton_interpolation_coeffs(&xs, &ys);
        let expect = [2.0, -1.0, 3.0, 0.0, -0.5];
        for (a, b) in c.iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn sphere_normals_focus_at_center() {
        // All curvature centers of a sphere coincide at its center: a
        // single hit with full kernel.
        let s = catalog::surface("sphere", &[1.0]).unwrap();
        let fam = LineFamily::new(s.chart.clone(), s.normal_field()).unwrap();
        let u = [1.1, 0.8];
        let hits = focal_points_generic(&fam, &u).unwrap();
        assert_eq!(hits.len(), 1);
        let hit = &hits[0];
        assert!(
            hit.point.norm() < 1e-8,
            "center miss {:.2e}",
            hit.point.norm()
        );
        assert_eq!(hit.kernel_dim, 2);
        assert_eq!(hit.multiplicity, 2);
        // Offset from the surface point along ν is −R.
        let line = fam.phi(&u).unwrap();
        let p = s.chart.value(&u).unwrap();
        assert!((hit.offset_from(&line, &p) + 1.0).abs() < 1e-9);
    }

    #[test]
    fn pencil_focuses_at_its_center() {
        // Lines through a fixed point c: single hit at r = ⟨c, ξ⟩ with
        // full kernel dimension.
        let c = [0.4, -0.2, 0.7];
        let s = catalog::surface("sphere", &[1.0]).unwrap();
        let center = c.to_vec();
        let inner = s.chart.clone();
        let chart = Chart::new_analytic(2, 3, inner.domain().clone(), move |u| {
            let mut jet = inner.jet(u).expect("sphere jet");
            jet.value = VecA::new(
                jet.value
                    .iter()
                    .zip(center.iter())
                    .map(|(x, c)| x + c)
                    .collect(),
            );
            jet
        });
        let field = catalog::radial_field(&chart, &c);
        let fam = LineFamily::new(chart, field).unwrap();
        let u = [0.9, 1.3];
        let hits = focal_points_generic(&fam, &u).unwrap();
        assert_eq!(hits.len(), 1);
        let hit = &hits[0];
        let cv = VecA::from(&c[..]);
        assert!(hit.point.distance(&cv) < 1e-8);
        assert_eq!(hit.kernel_dim, 2);
        let line = fam.phi(&u).unwrap();
        assert!((hit.r - cv.dot(line.xi())).abs() < 1e-9);
    }

    #[test]
    fn ellipsoid_focal_roots_match_radii() {
        // Focal parameters from the rank-drop polynomial against the shape
        // spectrum radii (two independent computations).
        let s = catalog::surface("ellipsoid", &[1.0, 1.5, 2.0]).unwrap();
        let nu = s.normal_field();
        let fam = LineFamily::new(s.chart.clone(), nu.clone()).unwrap();
        let u = [0.9, 0.7];
        let hits = focal_points_generic(&fam, &u).unwrap();
        assert_eq!(hits.len(), 2);
        let spec = shape_spectrum(&s.chart, &nu, &u, None).unwrap();
        let line = fam.phi(&u).unwrap();
        let p = s.chart.value(&u).unwrap();
        // Offsets along ν are −rᵢ; compare as sorted multisets.
        let mut offsets: Vec<f64> = hits.iter().map(|h| -h.offset_from(&line, &p)).collect();
        offsets.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (o, r) in offsets.iter().zip(spec.radii.iter()) {
            assert!((o - r).abs() < 1e-8, "offset {o} vs radius {r}");
        }
    }

    #[test]
    fn sphere_spectrum_collides_and_torus_radii_check_out() {
        let s = catalog::surface("sphere", &[2.5]).unwrap();
        let spec = shape_spectrum(&s.chart, &s.normal_field(), &[1.0, 1.0], None).unwrap();
        assert!(spec.multiplicity_collision);
        assert!((spec.radii[0] - 2.5).abs() < 1e-10);
        assert!((spec.radii[1] - 2.5).abs() < 1e-10);

        let t = catalog::surface("torus", &[2.0, 0.5]).unwrap();
        let spec = shape_spectrum(&t.chart, &t.normal_field(), &[0.4, 1.0], None).unwrap();
        // Tube radius r and the outer radius (R + r cos u)/cos u.
        let expect_tube = 0.5;
        let expect_outer = (2.0 + 0.5 * 0.4_f64.cos()) / 0.4_f64.cos();
        assert!((spec.radii[0] - expect_tube).abs() < 1e-10);
        assert!((spec.radii[1] - expect_outer).abs() < 1e-9);
        assert!(spec.strictly_convex);
    }

    #[test]
    fn plane_is_not_strictly_convex() {
        let s = catalog::surface("plane", &[]).unwrap();
        assert!(matches!(
            shape_spectrum(&s.chart, &s.normal_field(), &[0.3, 0.4], None),
            Err(FocalError::NonConvex { .. })
        ));
    }

    #[test]
    fn spectrum_satisfies_eigen_relation() {
        // ‖rᵢ·∇̄_{Xᵢ}ν − Xᵢ‖ < 1e-8 and directions orthonormal.
        let s = catalog::surface("ellipsoid", &[1.0, 1.5, 2.0]).unwrap();
        let nu = s.normal_field();
        let u = [1.2, 0.9];
        let spec = shape_spectrum(&s.chart, &nu, &u, None).unwrap();
        let dnu = nu.first_derivs(&u).unwrap();
        for i in 0..2 {
            let mut dn = VecA::zeros(3);
            for (c, d) in spec.coeffs[i].iter().zip(dnu.iter()) {
                dn = dn.add_scaled(*c, d);
            }
            let res = dn
                .scale(spec.radii[i])
                .add_scaled(-1.0, &spec.directions[i]);
            assert!(
                res.norm() < 1e-8,
                "eigen relation residual {:.2e}",
                res.norm()
            );
            assert!((spec.directions[i].norm() - 1.0).abs() < 1e-10);
        }
        assert!(spec.directions[0].dot(&spec.directions[1]).abs() < 1e-8);
    }

    #[test]
    fn shape_spectrum_matches_fundamental_forms_oracle() {
        // Independent oracle: radii from the generalized eigenproblem
        // II·c = κ·I·c of the fundamental forms, using only the chart's
        // second derivatives and the normal value (no normal derivatives).
        let s = catalog::surface("ellipsoid", &[1.0, 1.5, 2.0]).unwrap();
        let nu = s.normal_field();
        let mut rng = crate::rng::SplitMix64::new(0xfeed);
        for _ in 0..25 {
            let u = [rng.uniform(0.5, 2.4), rng.uniform(0.4, 5.8)];
            let spec = shape_spectrum(&s.chart, &nu, &u, None).unwrap();
            let jet = s.chart.jet(&u).unwrap();
            let nu_v = nu.value(&u).unwrap();
            let mut ii = Mat::zeros(2, 2);
            let mut gi = Mat::zeros(2, 2);
            for a in 0..2 {
                for b in 0..2 {
                    gi[(a, b)] = jet.first[a].dot(&jet.first[b]);
                    // ⟨∇̄_a ν, ∂_b⟩ = −⟨ν, ∂²_ab map⟩ since ⟨ν, ∂_b⟩ ≡ 0.
                    ii[(a, b)] = -nu_v.dot(&jet.second[a][b]);
                }
            }
            // With ii_ab = ⟨∇̄_a ν, ∂_b⟩ and A the coordinate matrix of
            // the shape operator, ii = Aᵀ G, so A = G⁻¹ ii (ii symmetric).
            let det = gi[(0, 0)] * gi[(1, 1)] - gi[(0, 1)] * gi[(1, 0)];
            let mut a_op = Mat::zeros(2, 2);
            let g00 = gi[(1, 1)] / det;
            let g11 = gi[(0, 0)] / det;
            let g01 = -gi[(0, 1)] / det;
            for r in 0..2 {
                for c in 0..2 {
                    let gr0 = if r == 0 { g00 } else { g01 };
                    let gr1 = if r == 0 { g01 } else { g11 };
                    a_op[(r, c)] = gr0 * ii[(0, c)] + gr1 * ii[(1, c)];
                }
            }
            let tr = a_op[(0, 0)] + a_op[(1, 1)];
            let dt = a_op[(0, 0)] * a_op[(1, 1)] - a_op[(0, 1)] * a_op[(1, 0)];
            let disc = (tr * tr / 4.0 - dt).max(0.0).sqrt();
            let kappas = [tr / 2.0 + disc, tr / 2.0 - disc];
            let mut radii_oracle: Vec<f64> = kappas.iter().map(|k| 1.0 / k).collect();
            radii_oracle.sort_by(|x, y| x.partial_cmp(y).unwrap());
            for (r, ro) in spec.radii.iter().zip(radii_oracle.iter()) {
                assert!((r - ro).abs() < 1e-8, "radius {r} vs oracle {ro} at {u:?}");
            }
        }
    }

    #[test]
    fn ridge_on_symmetry_plane_of_ellipsoid() {
        // On the y-z principal section of ellipsoid(1, 1.5, 2) the radii
        // are extremal across the plane, so one of the dr_i(X_i) vanishes.
        let s = catalog::surface("ellipsoid", &[1.0, 1.5, 2.0]).unwrap();
        let nu = s.normal_field();
        let u_sym = [1.0, std::f64::consts::FRAC_PI_2];
        let r0 = ridge_residual(&s.chart, &nu, &u_sym, 0).unwrap();
        let r1 = ridge_residual(&s.chart, &nu, &u_sym, 1).unwrap();
        assert!(
            r0.min(r1) < 1e-6,
            "expected a ridge on the symmetry plane, got {r0:.2e}, {r1:.2e}"
        );
        // Generic point off the symmetry planes: no ridge either index.
        let u_gen = [0.9, 0.7];
        assert!(ridge_residual(&s.chart, &nu, &u_gen, 0).unwrap() > 1e-3);
        assert!(ridge_residual(&s.chart, &nu, &u_gen, 1).unwrap() > 1e-3);
    }

    #[test]
    fn sphere_rejected_for_sheets() {
        let s = catalog::surface("sphere", &[1.0]).unwrap();
        let grid = Grid::new(vec![GridAxis::new(0.8, 1.2, 4), GridAxis::new(0.8, 1.2, 4)]);
        assert!(matches!(
            FocalSheet::build(&s.chart, &s.normal_field(), 0, &grid),
            Err(FocalError::MultiplicityCollision { .. })
        ));
        assert!(matches!(
            ridge_residual(&s.chart, &s.normal_field(), &[1.0, 1.0], 0),
            Err(FocalError::MultiplicityCollision { .. })
        ));
    }

    #[test]
    fn principal_field_sign_and_normalization() {
        let s = catalog::surface("ellipsoid", &[1.0, 1.5, 2.0]).unwrap();
        let nu = s.normal_field();
        let grid = Grid::new(vec![GridAxis::new(0.7, 1.1, 5), GridAxis::new(0.5, 0.9, 5)]);
        let pf = principal_field(&s.chart, &nu, 0, &grid).unwrap();
        // Unit directions consistently oriented across neighbors.
        for flat in 0..grid.len() {
            for axis in 0..2 {
                if let Some(nb) = grid.neighbor(flat, axis, 1) {
                    assert!(pf.unit_dirs[flat].dot(&pf.unit_dirs[nb]) > 0.0);
                }
            }
        }
        // dr_i(X_i) = 1 recomputed independently; orthogonality of the two
        // normalized principal fields.
        let pf1 = principal_field(&s.chart, &nu, 1, &grid).unwrap();
        for (flat, u) in grid.points().enumerate() {
            let jac = s.chart.jacobian(&u).unwrap();
            let coeffs = jac.least_squares(&pf.normalized[flat]).unwrap();
            let d = radius_derivative(&s.chart, &nu, &u, 0, &coeffs, None).unwrap();
            assert!((d - 1.0).abs() < 1e-5, "dr(X) = {d}");
            let cosang = pf.normalized[flat].dot(&pf1.normalized[flat])
                / (pf.normalized[flat].norm() * pf1.normalized[flat].norm());
            assert!(cosang.abs() < 1e-6, "principal fields not orthogonal");
        }
    }

    #[test]
    fn sheet_tangent_contains_normal_direction() {
        // ν(q) lies in the tangent span of the sheet at Y(q).
        let s = catalog::surface("ellipsoid", &[1.0, 1.5, 2.0]).unwrap();
        let nu = s.normal_field();
        let grid = Grid::new(vec![GridAxis::new(0.7, 1.1, 5), GridAxis::new(0.5, 0.9, 5)]);
        let sheet = FocalSheet::build(&s.chart, &nu, 0, &grid).unwrap();
        for u in grid.points() {
            let first = sheet.first_derivs(&u).unwrap();
            let jac = Mat::from_cols(&first);
            let nu_v = nu.value(&u).unwrap();
            let proj = jac.project_onto_columns(&nu_v).unwrap();
            let angle = nu_v.distance(&proj);
            assert!(angle < 1e-5, "normal out of sheet tangent by {angle:.2e}");
        }
    }

    #[test]
    fn sheet_field_reproduces_normal_and_lines() {
        let s = catalog::surface("ellipsoid", &[1.0, 1.5, 2.0]).unwrap();
        let nu = s.normal_field();
        let grid = Grid::new(vec![GridAxis::new(0.7, 1.1, 4), GridAxis::new(0.5, 0.9, 4)]);
        let sheet = FocalSheet::build(&s.chart, &nu, 0, &grid).unwrap();
        for u in grid.points() {
            let v = sheet.v_field_raw(&u).unwrap();
            let nu_v = nu.value(&u).unwrap();
            assert!(
                v.distance(&nu_v) < 1e-6,
                "v∘Y vs ν: {:.2e}",
                v.distance(&nu_v)
            );
            // Φ_{v} ∘ Y = Φ_ν as oriented lines.
            let y = sheet.value(&u).unwrap();
            let line_sheet = OrientedLine::from_point_direction(&y, &v.normalized()).unwrap();
            let p = s.chart.value(&u).unwrap();
            let line_surf = OrientedLine::from_point_direction(&p, &nu_v).unwrap();
            assert!(line_sheet.approx_eq(&line_surf, 1e-8));
        }
    }

    #[test]
    fn signed_distance_is_minus_astigmatism() {
        let s = catalog::surface("ellipsoid", &[1.0, 1.5, 2.0]).unwrap();
        let nu = s.normal_field();
        let grid = Grid::new(vec![GridAxis::new(0.7, 1.1, 4), GridAxis::new(0.5, 0.9, 4)]);
        let sheet0 = FocalSheet::build(&s.chart, &nu, 0, &grid).unwrap();
        let sheet1 = FocalSheet::build(&s.chart, &nu, 1, &grid).unwrap();
        let mu = signed_distance(&sheet0, &sheet1).unwrap();
        for (a, b) in mu.values.iter().zip(mu.minus_astigmatism.iter()) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
        // i = j vanishes identically; antisymmetry against the swap.
        let mu_same = signed_distance(&sheet0, &sheet0).unwrap();
        assert!(mu_same.values.iter().all(|x| x.abs() < 1e-9));
        let mu_swap = signed_distance(&sheet1, &sheet0).unwrap();
        for (a, b) in mu.values.iter().zip(mu_swap.values.iter()) {
            assert!((a + b).abs() < 1e-7);
        }
    }

    #[test]
    fn grid_mismatch_detected() {
        let s = catalog::surface("ellipsoid", &[1.0, 1.5, 2.0]).unwrap();
        let nu = s.normal_field();
        let g1 = Grid::new(vec![GridAxis::new(0.7, 1.1, 4), GridAxis::new(0.5, 0.9, 4)]);
        let g2 = Grid::new(vec![GridAxis::new(0.7, 1.1, 5), GridAxis::new(0.5, 0.9, 5)]);
        let sheet0 = FocalSheet::build(&s.chart, &nu, 0, &g1).unwrap();
        let sheet1 = FocalSheet::build(&s.chart, &nu, 1, &g2).unwrap();
        assert!(matches!(
            signed_distance(&sheet0, &sheet1),
            Err(FocalError::GridMismatch)
        ));
    }

    #[test]
    fn tangent_meridian_family_contains_source_in_focal_set() {
        // For a tangent field with nonvanishing ∇̄_v v the source point
        // itself is focal: r* = ⟨p, v(p)⟩ appears among the roots.
        let s = catalog::surface("surface_of_revolution", &[1.0, 0.0, 0.25]).unwrap();
        let field = catalog::named_tangent_field("meridian", &s.chart).unwrap();
        let fam = LineFamily::new(s.chart.clone(), field).unwrap();
        let u = [0.3, 1.2];
        let hits = focal_points_generic(&fam, &u).unwrap();
        let p = s.chart.value(&u).unwrap();
        let line = fam.phi(&u).unwrap();
        let r_star = line.parameter_of_closest(&p);
        let best = hits
            .iter()
            .map(|h| (h.r - r_star).abs())
            .fold(f64::INFINITY, f64::min);
        assert!(best < 1e-8, "source point not focal: gap {best:.2e}");
    }

    #[test]
    fn focal_count_bound_under_fuzz() {
        // Never more than n distinct focal parameters for k ≤ n families.
        let mut rng = crate::rng::SplitMix64::new(0x50f1);
        let surfaces = [
            catalog::surface("ellipsoid", &[1.0, 1.5, 2.0]).unwrap(),
            catalog::surface("torus", &[2.0, 0.5]).unwrap(),
            catalog::surface("graph", &[0.0, 0.1, -0.2, 0.8, 0.3, 1.1]).unwrap(),
        ];
        for trial in 0..300 {
            let s = &surfaces[trial % surfaces.len()];
            let dom = s.chart.domain();
            let u: Vec<f64> = (0..2)
                .map(|a| {
                    let lo = dom.lo()[a] + 0.05;
                    let hi = dom.hi()[a] - 0.05;
                    rng.uniform(lo, hi)
                })
                .collect();
            let fam = match trial % 3 {
                0 => LineFamily::new(s.chart.clone(), s.normal_field()).unwrap(),
                1 => LineFamily::new(
                    s.chart.clone(),
                    catalog::named_tangent_field("meridian", &s.chart).unwrap(),
                )
                .unwrap(),
                _ => LineFamily::new(
                    s.chart.clone(),
                    catalog::named_tangent_field("latitude", &s.chart).unwrap(),
                )
                .unwrap(),
            };
            match focal_points_generic(&fam, &u) {
                Ok(hits) => assert!(hits.len() <= 2, "{} hits at {u:?}", hits.len()),
                // Degenerate frames can occur for special fields; the bound
                // only speaks about immersed frames.
                Err(FocalError::DegenerateFrame(_)) => {}
                Err(e) => panic!("unexpected error {e}"),
            }
        }
    }
}
