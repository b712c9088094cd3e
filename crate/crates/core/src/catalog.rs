//! Built-in surface and field catalog.
//!
//! Surfaces are analytic charts (exact first and second derivatives), each
//! shipping with an outward unit normal field whose derivative is also
//! analytic. Identifiers and parameter signatures:
//!
//! - `plane` — the coordinate plane `(u, w) ↦ (u, w, 0)`.
//! - `sphere(R)` — round sphere of radius `R` in `R³`.
//! - `ellipsoid(a, b, c)` — triaxial ellipsoid in `R³`.
//! - `ellipsoid(a, b, c, d)` — ellipsoid hypersurface in `R⁴` (3 parameters).
//! - `torus(R, r)` — torus of revolution, tube radius `r`; the default
//!   domain restricts to the strictly convex outer band.
//! - `surface_of_revolution(c₀, c₁, …)` — profile radius `ρ(z) = Σ cᵢ zⁱ`
//!   revolved around the z-axis, chart `(z, φ)`.
//! - `graph(c₀₀, c₁₀, c₀₁, c₂₀, c₁₁, c₀₂, …)` — graph of a bivariate
//!   polynomial in graded-lex coefficient order.
//!
//! Named unit fields over a chart:
//!
//! - `normal` — the surface's outward unit normal.
//! - `meridian` — normalized first coordinate vector (on spheres these
//!   parameter curves are great circles through the poles, so
//!   `great_circle` is an alias).
//! - `latitude` — normalized second coordinate vector.
//! - `gradient_of(a₁, …, a_{n+1})` — normalized tangential gradient of the
//!   linear form `x ↦ ⟨a, x⟩`.
//! - `radial(c₁, …, c_{n+1})` — unit field pointing away from a fixed
//!   center; generates the pencil of lines through that center.

use std::sync::Arc;

use thiserror::Error;

use crate::families::{Chart, DomainBox, FieldKind, UnitField};
use crate::numerics::{DiffBackend, Jet2, VecA};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown surface id {0:?}")]
    UnknownSurface(String),
    #[error("unknown field {0:?}")]
    UnknownField(String),
    #[error("bad parameters for {id}: {msg}")]
    BadParams { id: String, msg: String },
}

fn bad(id: &str, msg: impl Into<String>) -> CatalogError {
    CatalogError::BadParams {
        id: id.to_string(),
        msg: msg.into(),
    }
}

/// A catalog surface: analytic chart plus its outward unit normal field.
pub struct CatalogSurface {
    pub chart: Arc<Chart>,
    normal: UnitField,
}

impl CatalogSurface {
    pub fn normal_field(&self) -> UnitField {
        self.normal.clone()
    }
}

/// Normalize a vector-with-derivatives pair: `v = w/‖w‖` and
/// `∂ᵢv = (∂ᵢw − v⟨v,∂ᵢw⟩)/‖w‖`.
fn normalize_with_derivs(w: &VecA, dw: &[VecA]) -> (VecA, Vec<VecA>) {
    let n = w.norm();
    let v = w.scale(1.0 / n);
    let dv = dw
        .iter()
        .map(|d| d.reject_from_unit(&v).scale(1.0 / n))
        .collect();
    (v, dv)
}

/// Unit field from closures producing an (unnormalized) vector and its
/// parameter derivatives; normalization handled here.
fn field_from_raw<W>(chart: &Arc<Chart>, kind: FieldKind, raw: W) -> UnitField
where
    W: Fn(&[f64]) -> (VecA, Vec<VecA>) + Send + Sync + Clone + 'static,
{
    let raw_v = raw.clone();
    let value = move |u: &[f64]| -> VecA {
        let (w, dw) = raw_v(u);
        normalize_with_derivs(&w, &dw).0
    };
    let raw_d = raw;
    let deriv = move |u: &[f64]| -> Vec<VecA> {
        let (w, dw) = raw_d(u);
        normalize_with_derivs(&w, &dw).1
    };
    UnitField::from_closures(
        chart.clone(),
        kind,
        DiffBackend::Analytic,
        value,
        Some(Arc::new(deriv)),
    )
}

// ────────────────────────────────────────────────────────────────────
// Hyperspherical parametrization with exact jets.
//
// Component m of the unit k-sphere chart is a product over axes of
// sin/cos factors; derivatives follow from the product rule, so the same
// code serves S² in R³ and S³ in R⁴.
// ────────────────────────────────────────────────────────────────────

#[derive(Clone, Copy, PartialEq)]
enum Trig {
    Sin,
    Cos,
    One,
}

fn trig_eval(t: Trig, x: f64, order: usize) -> f64 {
    match t {
        Trig::One => {
            if order == 0 {
                1.0
            } else {
                0.0
            }
        }
        Trig::Sin => match order {
            0 => x.sin(),
            1 => x.cos(),
            _ => -x.sin(),
        },
        Trig::Cos => match order {
            0 => x.cos(),
            1 => -x.sin(),
            _ => -x.cos(),
        },
    }
}

/// Factor table of the k-sphere chart: `factors[m][j]` is the trig factor
/// of component `m` along axis `j`.
fn sphere_factors(k: usize) -> Vec<Vec<Trig>> {
    let mut rows = Vec::with_capacity(k + 1);
    for m in 0..=k {
        let mut row = Vec::with_capacity(k);
        for j in 0..k {
            row.push(if j < m {
                Trig::Sin
            } else if j == m {
                Trig::Cos
            } else {
                Trig::One
            });
        }
        rows.push(row);
    }
    rows
}

/// Jet of the scaled sphere chart `θ ↦ diag(semi) · s(θ)`.
fn scaled_sphere_jet(semi: &[f64], params: &[f64]) -> Jet2 {
    let k = params.len();
    let factors = sphere_factors(k);
    let dim = semi.len();
    let component = |m: usize, orders: &[usize]| -> f64 {
        let mut prod = semi[m];
        for j in 0..k {
            prod *= trig_eval(factors[m][j], params[j], orders[j]);
        }
        prod
    };
    let mut orders = vec![0usize; k];
    let value = VecA::new((0..dim).map(|m| component(m, &orders)).collect());
    let mut first = Vec::with_capacity(k);
    for i in 0..k {
        orders[i] = 1;
        first.push(VecA::new((0..dim).map(|m| component(m, &orders)).collect()));
        orders[i] = 0;
    }
    let mut second = vec![vec![VecA::zeros(dim); k]; k];
    for i in 0..k {
        for j in i..k {
            if i == j {
                orders[i] = 2;
            } else {
                orders[i] = 1;
                orders[j] = 1;
            }
            let v = VecA::new((0..dim).map(|m| component(m, &orders)).collect());
            orders[i] = 0;
            orders[j] = 0;
            second[i][j] = v.clone();
            second[j][i] = v;
        }
    }
    Jet2 {
        value,
        first,
        second,
    }
}

fn ellipsoid_surface(semi: &[f64]) -> Result<CatalogSurface, CatalogError> {
    if semi.iter().any(|a| *a <= 0.0) {
        return Err(bad("ellipsoid", "semiaxes must be positive"));
    }
    let k = semi.len() - 1;
    let domain = match k {
        2 => DomainBox::new(vec![0.3, 0.2], vec![2.84, 6.08]),
        3 => DomainBox::new(vec![0.35, 0.35, 0.2], vec![2.79, 2.79, 6.08]),
        _ => return Err(bad("ellipsoid", "needs 3 or 4 semiaxes")),
    };
    let semi_owned = semi.to_vec();
    let chart = Chart::new_analytic(k, k + 1, domain, move |u| scaled_sphere_jet(&semi_owned, u));
    // Outward normal direction before normalization: w_m = x_m / a_m².
    let semi_n = semi.to_vec();
    let normal = field_from_raw(&chart, FieldKind::Normal, move |u: &[f64]| {
        let jet = scaled_sphere_jet(&semi_n, u);
        let scale = |v: &VecA| {
            VecA::new(
                v.iter()
                    .zip(semi_n.iter())
                    .map(|(x, a)| x / (a * a))
                    .collect(),
            )
        };
        let w = scale(&jet.value);
        let dw = jet.first.iter().map(&scale).collect();
        (w, dw)
    });
    Ok(CatalogSurface { chart, normal })
}

fn plane_surface() -> CatalogSurface {
    let domain = DomainBox::new(vec![-2.0, -2.0], vec![2.0, 2.0]);
    let chart = Chart::new_analytic(2, 3, domain, |u| {
        let z = VecA::zeros(3);
        Jet2 {
            value: VecA::new(vec![u[0], u[1], 0.0]),
            first: vec![
                VecA::new(vec![1.0, 0.0, 0.0]),
                VecA::new(vec![0.0, 1.0, 0.0]),
            ],
            second: vec![vec![z.clone(), z.clone()], vec![z.clone(), z.clone()]],
        }
    });
    let normal = field_from_raw(&chart, FieldKind::Normal, |u: &[f64]| {
        let _ = u;
        (
            VecA::new(vec![0.0, 0.0, 1.0]),
            vec![VecA::zeros(3), VecA::zeros(3)],
        )
    });
    CatalogSurface { chart, normal }
}

fn torus_surface(big_r: f64, small_r: f64) -> Result<CatalogSurface, CatalogError> {
    if big_r <= small_r || small_r <= 0.0 {
        return Err(bad("torus", "needs R > r > 0"));
    }
    // Strictly convex outer band only.
    let domain = DomainBox::new(vec![-1.2, 0.2], vec![1.2, 6.08]);
    let chart = Chart::new_analytic(2, 3, domain, move |p| {
        let (u, ph) = (p[0], p[1]);
        let (cu, su, cp, sp) = (u.cos(), u.sin(), ph.cos(), ph.sin());
        let w = big_r + small_r * cu;
        Jet2 {
            value: VecA::new(vec![w * cp, w * sp, small_r * su]),
            first: vec![
                VecA::new(vec![-small_r * su * cp, -small_r * su * sp, small_r * cu]),
                VecA::new(vec![-w * sp, w * cp, 0.0]),
            ],
            second: vec![
                vec![
                    VecA::new(vec![-small_r * cu * cp, -small_r * cu * sp, -small_r * su]),
                    VecA::new(vec![small_r * su * sp, -small_r * su * cp, 0.0]),
                ],
                vec![
                    VecA::new(vec![small_r * su * sp, -small_r * su * cp, 0.0]),
                    VecA::new(vec![-w * cp, -w * sp, 0.0]),
                ],
            ],
        }
    });
    let normal = field_from_raw(&chart, FieldKind::Normal, |p: &[f64]| {
        let (u, ph) = (p[0], p[1]);
        let (cu, su, cp, sp) = (u.cos(), u.sin(), ph.cos(), ph.sin());
        (
            VecA::new(vec![cu * cp, cu * sp, su]),
            vec![
                VecA::new(vec![-su * cp, -su * sp, cu]),
                VecA::new(vec![-cu * sp, cu * cp, 0.0]),
            ],
        )
    });
    Ok(CatalogSurface { chart, normal })
}

fn poly_eval_d2(coeffs: &[f64], x: f64) -> (f64, f64, f64) {
    let mut v = 0.0;
    let mut d1 = 0.0;
    let mut d2 = 0.0;
    for &c in coeffs.iter().rev() {
        d2 = d2 * x + 2.0 * d1;
        d1 = d1 * x + v;
        v = v * x + c;
    }
    (v, d1, d2)
}

fn revolution_surface(profile: &[f64]) -> Result<CatalogSurface, CatalogError> {
    if profile.is_empty() {
        return Err(bad("surface_of_revolution", "profile polynomial is empty"));
    }
    let domain = DomainBox::new(vec![-1.0, 0.2], vec![1.0, 6.08]);
    // Profile must stay positive over the z-range.
    for i in 0..=20 {
        let z = -1.0 + 2.0 * (i as f64) / 20.0;
        if poly_eval_d2(profile, z).0 <= 1e-6 {
            return Err(bad(
                "surface_of_revolution",
                "profile radius must be positive on [-1, 1]",
            ));
        }
    }
    let prof = profile.to_vec();
    let chart = Chart::new_analytic(2, 3, domain, move |p| {
        let (z, ph) = (p[0], p[1]);
        let (rho, d1, d2) = poly_eval_d2(&prof, z);
        let (cp, sp) = (ph.cos(), ph.sin());
        Jet2 {
            value: VecA::new(vec![rho * cp, rho * sp, z]),
            first: vec![
                VecA::new(vec![d1 * cp, d1 * sp, 1.0]),
                VecA::new(vec![-rho * sp, rho * cp, 0.0]),
            ],
            second: vec![
                vec![
                    VecA::new(vec![d2 * cp, d2 * sp, 0.0]),
                    VecA::new(vec![-d1 * sp, d1 * cp, 0.0]),
                ],
                vec![
                    VecA::new(vec![-d1 * sp, d1 * cp, 0.0]),
                    VecA::new(vec![-rho * cp, -rho * sp, 0.0]),
                ],
            ],
        }
    });
    let prof_n = profile.to_vec();
    let normal = field_from_raw(&chart, FieldKind::Normal, move |p: &[f64]| {
        let (z, ph) = (p[0], p[1]);
        let (_, d1, d2) = poly_eval_d2(&prof_n, z);
        let (cp, sp) = (ph.cos(), ph.sin());
        // Unnormalized outward normal (cos φ, sin φ, −ρ'(z)).
        (
            VecA::new(vec![cp, sp, -d1]),
            vec![
                VecA::new(vec![0.0, 0.0, -d2]),
                VecA::new(vec![-sp, cp, 0.0]),
            ],
        )
    });
    Ok(CatalogSurface { chart, normal })
}

/// Graded-lex exponent pairs: (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), …
fn graded_lex_exponents(count: usize) -> Vec<(u32, u32)> {
    let mut out = Vec::with_capacity(count);
    let mut total = 0u32;
    'outer: loop {
        for i in (0..=total).rev() {
            out.push((i, total - i));
            if out.len() == count {
                break 'outer;
            }
        }
        total += 1;
    }
    out
}

fn bivariate_eval(coeffs: &[(f64, u32, u32)], u: f64, w: f64, du: u32, dw: u32) -> f64 {
    let mut acc = 0.0;
    for &(c, eu, ew) in coeffs {
        if eu < du || ew < dw {
            continue;
        }
        let mut factor = c;
        for s in 0..du {
            factor *= (eu - s) as f64;
        }
        for s in 0..dw {
            factor *= (ew - s) as f64;
        }
        acc += factor * u.powi((eu - du) as i32) * w.powi((ew - dw) as i32);
    }
    acc
}

fn graph_surface(coeffs: &[f64]) -> Result<CatalogSurface, CatalogError> {
    if coeffs.is_empty() {
        return Err(bad("graph", "needs at least one coefficient"));
    }
    let expo = graded_lex_exponents(coeffs.len());
    let packed: Vec<(f64, u32, u32)> = coeffs
        .iter()
        .zip(expo.iter())
        .map(|(&c, &(a, b))| (c, a, b))
        .collect();
    let domain = DomainBox::new(vec![-1.5, -1.5], vec![1.5, 1.5]);
    let pk = packed.clone();
    let chart = Chart::new_analytic(2, 3, domain, move |p| {
        let (u, w) = (p[0], p[1]);
        let f = |du, dw| bivariate_eval(&pk, u, w, du, dw);
        Jet2 {
            value: VecA::new(vec![u, w, f(0, 0)]),
            first: vec![
                VecA::new(vec![1.0, 0.0, f(1, 0)]),
                VecA::new(vec![0.0, 1.0, f(0, 1)]),
            ],
            second: vec![
                vec![
                    VecA::new(vec![0.0, 0.0, f(2, 0)]),
                    VecA::new(vec![0.0, 0.0, f(1, 1)]),
                ],
                vec![
                    VecA::new(vec![0.0, 0.0, f(1, 1)]),
                    VecA::new(vec![0.0, 0.0, f(0, 2)]),
                ],
            ],
        }
    });
    let pk2 = packed;
    let normal = field_from_raw(&chart, FieldKind::Normal, move |p: &[f64]| {
        let (u, w) = (p[0], p[1]);
        let f = |du, dw| bivariate_eval(&pk2, u, w, du, dw);
        (
            VecA::new(vec![-f(1, 0), -f(0, 1), 1.0]),
            vec![
                VecA::new(vec![-f(2, 0), -f(1, 1), 0.0]),
                VecA::new(vec![-f(1, 1), -f(0, 2), 0.0]),
            ],
        )
    });
    Ok(CatalogSurface { chart, normal })
}

/// Instantiate a catalog surface by id.
pub fn surface(id: &str, params: &[f64]) -> Result<CatalogSurface, CatalogError> {
    match id {
        "plane" => {
            if !params.is_empty() {
                return Err(bad("plane", "takes no parameters"));
            }
            Ok(plane_surface())
        }
        "sphere" => {
            if params.len() != 1 || params[0] <= 0.0 {
                return Err(bad("sphere", "needs one positive radius"));
            }
            ellipsoid_surface(&[params[0]; 3])
        }
        "ellipsoid" => match params.len() {
            3 | 4 => ellipsoid_surface(params),
            _ => Err(bad("ellipsoid", "needs 3 or 4 semiaxes")),
        },
        "torus" => {
            if params.len() != 2 {
                return Err(bad("torus", "needs (R, r)"));
            }
            torus_surface(params[0], params[1])
        }
        "surface_of_revolution" => revolution_surface(params),
        "graph" => graph_surface(params),
        other => Err(CatalogError::UnknownSurface(other.to_string())),
    }
}

/// Normalized chart coordinate field along `axis`; tangent by construction,
/// with analytic derivatives taken from the chart's second derivatives.
pub fn coordinate_field(chart: &Arc<Chart>, axis: usize) -> UnitField {
    let ch = chart.clone();
    field_from_raw(chart, FieldKind::Tangent, move |u: &[f64]| {
        let jet = ch.jet(u).expect("coordinate field inside chart domain");
        let w = jet.first[axis].clone();
        let dw = (0..ch.dim()).map(|j| jet.second[axis][j].clone()).collect();
        (w, dw)
    })
}

/// Normalized tangential gradient of the linear form `x ↦ ⟨a, x⟩`.
/// Derivatives by central differences (the projection makes closed-form
/// derivatives unwieldy and the consumers tolerate FD accuracy).
pub fn gradient_field(chart: &Arc<Chart>, linear_form: &[f64]) -> UnitField {
    let a = VecA::from(linear_form);
    let ch = chart.clone();
    let value = move |u: &[f64]| -> VecA {
        let jet = ch.jet(u).expect("gradient field inside chart domain");
        let jac = crate::numerics::Mat::from_cols(&jet.first);
        jac.project_onto_columns(&a)
            .expect("full-rank chart")
            .normalized()
    };
    UnitField::from_closures(
        chart.clone(),
        FieldKind::Tangent,
        DiffBackend::central_fd(),
        value,
        None,
    )
}

/// Unit field pointing away from `center` (the pencil of lines through the
/// center, traversed outward).
pub fn radial_field(chart: &Arc<Chart>, center: &[f64]) -> UnitField {
    let c = VecA::from(center);
    let ch = chart.clone();
    field_from_raw(chart, FieldKind::General, move |u: &[f64]| {
        let jet = ch.jet(u).expect("radial field inside chart domain");
        let w = &jet.value - &c;
        (w, jet.first.clone())
    })
}

/// Named tangent fields: `meridian`, `latitude`, `great_circle`.
pub fn named_tangent_field(name: &str, chart: &Arc<Chart>) -> Result<UnitField, CatalogError> {
    match name {
        "meridian" | "great_circle" => Ok(coordinate_field(chart, 0)),
        "latitude" => {
            if chart.dim() < 2 {
                return Err(bad("latitude", "chart needs at least 2 parameters"));
            }
            Ok(coordinate_field(chart, 1))
        }
        other => Err(CatalogError::UnknownField(other.to_string())),
    }
}

/// Human-readable catalog listing (ids, signatures, default domains).
pub fn listing() -> String {
    let mut s = String::new();
    s.push_str("surfaces:\n");
    s.push_str("  plane                              (u,w) in [-2,2]^2 -> (u,w,0)\n");
    s.push_str("  sphere(R)                          round sphere in R^3, angles (0.30..2.84, 0.20..6.08)\n");
    s.push_str("  ellipsoid(a,b,c)                   triaxial ellipsoid in R^3, same angle box\n");
    s.push_str("  ellipsoid(a,b,c,d)                 ellipsoid hypersurface in R^4, angles (0.35..2.79)^2 x (0.20..6.08)\n");
    s.push_str("  torus(R,r)                         strictly convex outer band, (u,phi) in (-1.20..1.20, 0.20..6.08)\n");
    s.push_str("  surface_of_revolution(c0,c1,...)   rho(z) = sum c_i z^i revolved, (z,phi) in (-1..1, 0.20..6.08)\n");
    s.push_str("  graph(c00,c10,c01,c20,c11,c02,...) bivariate polynomial graph over [-1.5,1.5]^2 (graded-lex)\n");
    s.push_str("fields:\n");
    s.push_str("  normal                             outward unit normal of the surface\n");
    s.push_str("  meridian | great_circle            normalized first coordinate direction\n");
    s.push_str("  latitude                           normalized second coordinate direction\n");
    s.push_str("  gradient_of(a1,...,an+1)           normalized tangential gradient of <a, x>\n");
    s.push_str(
        "  radial(c1,...,cn+1)                unit field away from a fixed center (line pencil)\n",
    );
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    #[test]
    fn catalog_surfaces_are_immersed_on_default_domain() {
        let cases: Vec<(&str, Vec<f64>)> = vec![
            ("plane", vec![]),
            ("sphere", vec![1.0]),
            ("ellipsoid", vec![1.0, 1.5, 2.0]),
            ("ellipsoid", vec![1.0, 1.3, 1.7, 2.1]),
            ("torus", vec![2.0, 0.5]),
            ("surface_of_revolution", vec![1.0, 0.0, 0.25]),
            ("graph", vec![0.0, 0.0, 0.0, 1.0, 0.0, 1.0]),
        ];
        for (id, params) in cases {
            let s = surface(id, &params).unwrap();
            let grid = Grid::over(s.chart.domain(), 4);
            s.chart
                .validate_immersion(&grid)
                .unwrap_or_else(|e| panic!("{id}: {e}"));
            s.normal_field()
                .validate_on(&grid)
                .unwrap_or_else(|e| panic!("{id} normal: {e}"));
        }
    }

    #[test]
    fn unknown_ids_error() {
        assert!(matches!(
            surface("hyperboloid", &[1.0]),
            Err(CatalogError::UnknownSurface(_))
        ));
        let s = surface("sphere", &[1.0]).unwrap();
        assert!(matches!(
            named_tangent_field("spiral", &s.chart),
            Err(CatalogError::UnknownField(_))
        ));
    }

    #[test]
    fn sphere_normal_is_radial() {
        let s = surface("sphere", &[2.0]).unwrap();
        let u = [0.9, 1.4];
        let p = s.chart.value(&u).unwrap();
        let nu = s.normal_field().value(&u).unwrap();
        // Outward normal of a centered sphere is p/R.
        assert!(nu.distance(&p.scale(0.5)) < 1e-12);
    }

    #[test]
    fn analytic_jets_match_finite_differences() {
        // Cross-backend agreement on the ellipsoid chart: numeric FD of the
        // same map against the analytic jet.
        let s = surface("ellipsoid", &[1.0, 1.5, 2.0]).unwrap();
        let chart_fd = {
            let inner = s.chart.clone();
            Chart::new_numeric(2, 3, inner.domain().clone(), 1e-5, move |u| {
                inner.value(u).unwrap()
            })
        };
        let u = [1.1, 2.3];
        let ja = s.chart.jet(&u).unwrap();
        let jf = chart_fd.jet(&u).unwrap();
        assert!(ja.value.distance(&jf.value) < 1e-14);
        let mut first_err: f64 = 0.0;
        for i in 0..2 {
            first_err = first_err.max(ja.first[i].distance(&jf.first[i]));
        }
        // Frozen from running both backends: first derivatives agree to
        // 1e-8 at h = 1e-5, second derivatives sit at the FD noise floor.
        assert!(first_err < 1e-8, "first-derivative gap {first_err:.2e}");
        let mut second_err: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                second_err = second_err.max(ja.second[i][j].distance(&jf.second[i][j]));
            }
        }
        assert!(second_err < 2e-5, "second-derivative gap {second_err:.2e}");
    }

    #[test]
    fn fd_first_derivative_converges_at_second_order() {
        // Halving h reduces the first-derivative error by at least 3.5x.
        let s = surface("ellipsoid", &[1.0, 1.5, 2.0]).unwrap();
        let u = [0.8, 1.9];
        let exact = s.chart.jet(&u).unwrap();
        let err_at = |h: f64| -> f64 {
            let inner = s.chart.clone();
            let fd = Chart::new_numeric(2, 3, inner.domain().clone(), h, move |p| {
                inner.value(p).unwrap()
            });
            let jf = fd.jet(&u).unwrap();
            (0..2)
                .map(|i| jf.first[i].distance(&exact.first[i]))
                .fold(0.0, f64::max)
        };
        let e1 = err_at(4e-4);
        let e2 = err_at(2e-4);
        assert!(
            e1 / e2 >= 3.5,
            "convergence ratio {:.2} (errors {e1:.2e}, {e2:.2e})",
            e1 / e2
        );
    }

    #[test]
    fn graded_lex_order() {
        let e = graded_lex_exponents(6);
        assert_eq!(e, vec![(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]);
    }
}
