//! The three-way equivalence for tangent-field line families, tested on
//! every built-in tangent scenario: the isotropy verdict must coincide with
//! the conjunction "geodesic residual below tolerance at all grid points
//! AND integrability residual below tolerance at all grid points", both
//! sides computed independently.

use congruence_core::catalog;
use congruence_core::families::LineFamily;
use congruence_core::focal::{self, FocalError};
use congruence_core::grid::Grid;

const GEO_TOL: f64 = 1e-6;
const FROB_TOL: f64 = 1e-5;

fn scenario(surface_id: &str, surface_params: &[f64], field_name: &str) -> (LineFamily, Grid) {
    let s = catalog::surface(surface_id, surface_params).unwrap();
    let field = catalog::named_tangent_field(field_name, &s.chart).unwrap();
    let grid = Grid::over_inset(s.chart.domain(), 9, 0.02);
    (LineFamily::new(s.chart, field).unwrap(), grid)
}

#[test]
fn isotropy_verdict_matches_geodesic_and_integrability() {
    // (surface, params, field, expected isotropy)
    let cases: Vec<(&str, Vec<f64>, &str, bool)> = vec![
        (
            "surface_of_revolution",
            vec![1.0, 0.0, 0.25],
            "meridian",
            true,
        ),
        (
            "surface_of_revolution",
            vec![1.0, 0.2, 0.15],
            "meridian",
            true,
        ),
        ("torus", vec![2.0, 0.5], "meridian", true),
        ("sphere", vec![1.0], "great_circle", true),
        ("sphere", vec![1.0], "latitude", false),
        ("torus", vec![2.0, 0.5], "latitude", false),
        ("ellipsoid", vec![1.0, 1.5, 2.0], "latitude", false),
    ];
    for (id, params, field, expect) in cases {
        let (fam, grid) = scenario(id, &params, field);
        let verdict = fam.is_isotropic(&grid, None).unwrap().verdict;
        let mut geo_ok = true;
        let mut frob_ok = true;
        for u in grid.points() {
            geo_ok &= fam.geodesic_residual(&u).unwrap() < GEO_TOL;
            frob_ok &= fam.frobenius_residual(&u).unwrap() < FROB_TOL;
        }
        assert_eq!(
            verdict,
            geo_ok && frob_ok,
            "{id}/{field}: isotropy verdict {verdict} but geodesic {geo_ok}, frobenius {frob_ok}"
        );
        assert_eq!(verdict, expect, "{id}/{field}: expected isotropy {expect}");
    }
}

#[test]
fn frame_rank_drop_exactly_at_straight_rulings() {
    // A tangent family degenerates exactly where the field's integral
    // curves are ambient-straight. Constant field on a flat plane: rank
    // drop everywhere. Meridian field on a curved profile: full rank.
    let plane = catalog::surface("plane", &[]).unwrap();
    let ruling = catalog::gradient_field(&plane.chart, &[1.0, 0.0, 0.0]);
    let fam = LineFamily::new(plane.chart.clone(), ruling).unwrap();
    // The field is constant, so the ambient acceleration vanishes...
    let frame = fam.d_phi(&[0.2, -0.3]).unwrap();
    let mut hor_norm: f64 = 0.0;
    for t in &frame.vectors {
        hor_norm = hor_norm.max(t.hor().norm());
    }
    assert!(
        hor_norm < 1e-9,
        "straight rulings still moved the direction"
    );
    // ...and the focal machinery reports the degenerate frame.
    assert!(matches!(
        focal::focal_points_generic(&fam, &[0.2, -0.3]),
        Err(FocalError::DegenerateFrame(_))
    ));

    // Curved-integral-curve family: full rank and a nonzero acceleration.
    let (fam2, _) = scenario("surface_of_revolution", &[1.0, 0.0, 0.25], "meridian");
    assert!(focal::focal_points_generic(&fam2, &[0.3, 1.0]).is_ok());
    assert!(fam2.geodesic_residual(&[0.3, 1.0]).unwrap() < GEO_TOL);
    // The ambient acceleration itself is nonzero even though the intrinsic
    // one vanishes (the meridian is a geodesic but not a straight line).
    let field = fam2.field();
    let dv = field.first_derivs(&[0.3, 1.0]).unwrap();
    let jac = fam2.chart().jacobian(&[0.3, 1.0]).unwrap();
    let v = field.value(&[0.3, 1.0]).unwrap();
    let coeffs = jac.least_squares(&v).unwrap();
    let mut acc = congruence_core::VecA::zeros(3);
    for (c, d) in coeffs.iter().zip(dv.iter()) {
        acc = acc.add_scaled(*c, d);
    }
    assert!(acc.norm() > 1e-3, "meridian acceleration unexpectedly zero");
}
