//! Check registry: each check computes a per-grid-point table, a verdict,
//! and a one-line summary.
//!
//! CSV column layouts (after the `u1..uk` parameter columns):
//!
//! - `is_isotropic`: `omega_max`
//! - `geodesic_residual`: `residual`
//! - `frobenius_residual`: `residual`
//! - `potential`: `f_theta`, `f_distance`, `grad_gap`
//! - `focal_oracle`: `root_gap`, `hit_count`
//! - `tangent_focality`: `gap`
//! - `sheet_structure`: `v_gap`, `line_gap`, `geodesic_residual`
//! - `sectional_law`, `ricci_law`: `lhs`, `rhs`, `abs_err`, `rel_err`
//! - `e2_eigenrelation`: `residual`, `e2_norm`, `mu_plus_s`
//! - `constant_astigmatism`: `ds`, `k_sheet`, `minus_inv_s2` (one row per located
//!   stationary-astigmatism point)

use congruence_core::curvature;
use congruence_core::families::FieldKind;
use congruence_core::focal;

use congruence_core::rng::SplitMix64;
use congruence_core::VecA;

use crate::config::{CheckSpec, Scenario};
use crate::output::CsvTable;

/// Geometry failure inside a check, carrying the grid location when known.
#[derive(Debug)]
pub struct CheckError {
    pub check: String,
    pub location: Option<Vec<f64>>,
    pub message: String,
}

impl std::fmt::Display for CheckError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.location {
            Some(loc) => write!(
                f,
                "check {:?} failed at grid point {:?}: {}",
                self.check, loc, self.message
            ),
            None => write!(f, "check {:?} failed: {}", self.check, self.message),
        }
    }
}

impl std::error::Error for CheckError {}

pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub summary: String,
    pub table: Option<CsvTable>,
}

fn err_at(check: &str, loc: Option<&[f64]>, e: impl std::fmt::Display) -> CheckError {
    CheckError {
        check: check.to_string(),
        location: loc.map(|l| l.to_vec()),
        message: e.to_string(),
    }
}

/// Apply the expected-verdict convention: a check passes when its verdict
/// matches `expect` (default `true`).
fn verdict_to_pass(spec: &CheckSpec, verdict: bool) -> bool {
    verdict == spec.expect.unwrap_or(true)
}

/// Locate the first grid point where sheet construction degenerates, so
/// build failures surface with a concrete location.
fn locate_sheet_failure(scenario: &Scenario, index: usize) -> Option<Vec<f64>> {
    let nu = scenario.normal.as_ref()?;
    for u in scenario.grid.points() {
        match focal::shape_spectrum(&scenario.chart, nu, &u, None) {
            Ok(spec) if !spec.multiplicity_collision => {}
            _ => return Some(u),
        }
        match focal::ridge_residual(&scenario.chart, nu, &u, index) {
            Ok(r) if r > focal::RIDGE_FLOOR => {}
            _ => return Some(u),
        }
    }
    None
}

fn sheet_err(
    scenario: &Scenario,
    name: &str,
    index: usize,
    e: impl std::fmt::Display,
) -> CheckError {
    let loc = locate_sheet_failure(scenario, index);
    err_at(name, loc.as_deref(), e)
}

pub fn run_check(scenario: &Scenario, spec: &CheckSpec) -> Result<CheckOutcome, CheckError> {
    match spec.name.as_str() {
        "is_isotropic" => is_isotropic(scenario, spec),
        "geodesic_residual" => residual_check(scenario, spec, true),
        "frobenius_residual" => residual_check(scenario, spec, false),
        "potential" => potential(scenario, spec),
        "focal_oracle" => focal_oracle(scenario, spec),
        "tangent_focality" => tangent_focality(scenario, spec),
        "sheet_structure" => sheet_structure(scenario, spec),
        "sectional_law" => curvature_law(scenario, spec, false),
        "ricci_law" => curvature_law(scenario, spec, true),
        "e2_eigenrelation" => e2_eigenrelation(scenario, spec),
        "constant_astigmatism" => constant_astigmatism(scenario, spec),
        other => Err(err_at(other, None, "unregistered check")),
    }
}

fn is_isotropic(scenario: &Scenario, spec: &CheckSpec) -> Result<CheckOutcome, CheckError> {
    let name = &spec.name;
    let tol = spec
        .tol
        .unwrap_or_else(|| scenario.family.default_isotropy_tol());
    let mut table = CsvTable::new(scenario.grid.dim(), &["omega_max"]);
    let mut max_abs: f64 = 0.0;
    for u in scenario.grid.points() {
        let omega = scenario
            .family
            .pullback_omega(&u)
            .map_err(|e| err_at(name, Some(&u), e))?;
        let m = omega.max_abs();
        max_abs = max_abs.max(m);
        table.push(&u, &[m]);
    }
    let verdict = max_abs < tol;
    let passed = verdict_to_pass(spec, verdict);
    Ok(CheckOutcome {
        name: name.clone(),
        passed,
        summary: format!(
            "is_isotropic: verdict={verdict} (max |omega| = {max_abs:.3e}, tol {tol:.1e}, \
             expected {})",
            spec.expect.unwrap_or(true)
        ),
        table: Some(table),
    })
}

fn residual_check(
    scenario: &Scenario,
    spec: &CheckSpec,
    geodesic: bool,
) -> Result<CheckOutcome, CheckError> {
    let name = &spec.name;
    let tol = spec.tol.unwrap_or(if geodesic { 1e-6 } else { 1e-5 });
    let mut table = CsvTable::new(scenario.grid.dim(), &["residual"]);
    let mut worst: f64 = 0.0;
    for u in scenario.grid.points() {
        let res = if geodesic {
            scenario.family.geodesic_residual(&u)
        } else {
            scenario.family.frobenius_residual(&u)
        }
        .map_err(|e| err_at(name, Some(&u), e))?;
        worst = worst.max(res);
        table.push(&u, &[res]);
    }
    let verdict = worst < tol;
    Ok(CheckOutcome {
        name: name.clone(),
        passed: verdict_to_pass(spec, verdict),
        summary: format!("{name}: verdict={verdict} (max residual {worst:.3e}, tol {tol:.1e})"),
        table: Some(table),
    })
}

fn potential(scenario: &Scenario, spec: &CheckSpec) -> Result<CheckOutcome, CheckError> {
    let name = &spec.name;
    let tol = spec.tol.unwrap_or(1e-5);
    let fam = &scenario.family;
    let axes = scenario.grid.axes();
    let base: Vec<f64> = axes.iter().map(|a| 0.5 * (a.min + a.max)).collect();

    // Path independence over deterministic homotopic pairs in the grid box.
    let mut rng = SplitMix64::new(0x9a7e);
    let mut worst_dev: f64 = 0.0;
    for _ in 0..10 {
        let pick = |rng: &mut SplitMix64| -> Vec<f64> {
            axes.iter().map(|a| rng.uniform(a.min, a.max)).collect()
        };
        let a = pick(&mut rng);
        let b = pick(&mut rng);
        let w = pick(&mut rng);
        let direct = fam
            .reconstruct_potential(&[a.clone(), b.clone()])
            .map_err(|e| err_at(name, Some(&a), e))?;
        let detour = fam
            .reconstruct_potential(&[a.clone(), w, b])
            .map_err(|e| err_at(name, Some(&a), e))?;
        worst_dev = worst_dev.max((direct - detour).abs());
    }

    // Potentials and the distance-potential gradient over the grid.
    let mut table = CsvTable::new(scenario.grid.dim(), &["f_theta", "f_distance", "grad_gap"]);
    let mut worst_grad: f64 = 0.0;
    for u in scenario.grid.points() {
        let f_theta = fam
            .potential_between(&base, &u)
            .map_err(|e| err_at(name, Some(&u), e))?;
        let f_dist = fam
            .distance_potential(&[base.clone(), u.to_vec()])
            .map_err(|e| err_at(name, Some(&u), e))?;
        // FD gradient of the distance potential vs the tangential part of v.
        let h = 1e-5;
        let mut df = vec![0.0; u.len()];
        for i in 0..u.len() {
            let mut up = u.to_vec();
            up[i] += h;
            let mut dn = u.to_vec();
            dn[i] -= h;
            let fp = fam
                .distance_potential(&[base.clone(), up])
                .map_err(|e| err_at(name, Some(&u), e))?;
            let fm = fam
                .distance_potential(&[base.clone(), dn])
                .map_err(|e| err_at(name, Some(&u), e))?;
            df[i] = (fp - fm) / (2.0 * h);
        }
        let jac = scenario
            .chart
            .jacobian(&u)
            .map_err(|e| err_at(name, Some(&u), e))?;
        let sol = jac
            .gram()
            .solve(&df)
            .map_err(|e| err_at(name, Some(&u), e))?;
        let grad = VecA::new(jac.mul_vec(&sol));
        let v_val = scenario
            .field
            .value(&u)
            .map_err(|e| err_at(name, Some(&u), e))?;
        let v_tan = jac
            .project_onto_columns(&v_val)
            .map_err(|e| err_at(name, Some(&u), e))?;
        let gap = grad.distance(&v_tan);
        worst_grad = worst_grad.max(gap);
        table.push(&u, &[f_theta, f_dist, gap]);
    }
    let verdict = worst_dev < tol && worst_grad < tol;
    Ok(CheckOutcome {
        name: name.clone(),
        passed: verdict_to_pass(spec, verdict),
        summary: format!(
            "potential: verdict={verdict} (path independence {worst_dev:.3e}, gradient gap \
             {worst_grad:.3e}, tol {tol:.1e})"
        ),
        table: Some(table),
    })
}

fn focal_oracle(scenario: &Scenario, spec: &CheckSpec) -> Result<CheckOutcome, CheckError> {
    let name = &spec.name;
    let tol = spec.tol.unwrap_or(1e-8);
    let nu = scenario
        .normal
        .as_ref()
        .ok_or_else(|| err_at(name, None, "focal_oracle needs a hypersurface scenario"))?;
    let mut table = CsvTable::new(scenario.grid.dim(), &["root_gap", "hit_count"]);
    let mut worst: f64 = 0.0;
    for u in scenario.grid.points() {
        let hits = focal::focal_points_generic(&scenario.family, &u)
            .map_err(|e| err_at(name, Some(&u), e))?;
        let spectrum = focal::shape_spectrum(&scenario.chart, nu, &u, None)
            .map_err(|e| err_at(name, Some(&u), e))?;
        let line = scenario
            .family
            .phi(&u)
            .map_err(|e| err_at(name, Some(&u), e))?;
        let p = scenario
            .chart
            .value(&u)
            .map_err(|e| err_at(name, Some(&u), e))?;
        let mut offsets: Vec<f64> = hits.iter().map(|h| -h.offset_from(&line, &p)).collect();
        offsets.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut gap: f64 = 0.0;
        if offsets.len() == spectrum.radii.len() {
            for (o, r) in offsets.iter().zip(spectrum.radii.iter()) {
                gap = gap.max((o - r).abs());
            }
        } else {
            gap = f64::INFINITY;
        }
        worst = worst.max(gap);
        table.push(&u, &[gap, hits.len() as f64]);
    }
    let verdict = worst < tol;
    Ok(CheckOutcome {
        name: name.clone(),
        passed: verdict_to_pass(spec, verdict),
        summary: format!(
            "focal_oracle: verdict={verdict} (max |root - radius| = {worst:.3e}, tol {tol:.1e})"
        ),
        table: Some(table),
    })
}

fn tangent_focality(scenario: &Scenario, spec: &CheckSpec) -> Result<CheckOutcome, CheckError> {
    let name = &spec.name;
    let tol = spec.tol.unwrap_or(1e-8);
    if scenario.field.kind() != FieldKind::Tangent {
        return Err(err_at(name, None, "tangent_focality needs a tangent field"));
    }
    let mut table = CsvTable::new(scenario.grid.dim(), &["gap"]);
    let mut worst: f64 = 0.0;
    for u in scenario.grid.points() {
        let hits = focal::focal_points_generic(&scenario.family, &u)
            .map_err(|e| err_at(name, Some(&u), e))?;
        let p = scenario
            .chart
            .value(&u)
            .map_err(|e| err_at(name, Some(&u), e))?;
        let line = scenario
            .family
            .phi(&u)
            .map_err(|e| err_at(name, Some(&u), e))?;
        let r_star = line.parameter_of_closest(&p);
        let gap = hits
            .iter()
            .map(|h| (h.r - r_star).abs())
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(gap);
        table.push(&u, &[gap]);
    }
    let verdict = worst < tol;
    Ok(CheckOutcome {
        name: name.clone(),
        passed: verdict_to_pass(spec, verdict),
        summary: format!(
            "tangent_focality: verdict={verdict} (max gap to r* = <p,v> is {worst:.3e}, \
             tol {tol:.1e})"
        ),
        table: Some(table),
    })
}

fn sheet_structure(scenario: &Scenario, spec: &CheckSpec) -> Result<CheckOutcome, CheckError> {
    let name = &spec.name;
    let index = spec.i.unwrap_or(0);
    let nu = scenario
        .normal
        .as_ref()
        .ok_or_else(|| err_at(name, None, "sheet_structure needs a hypersurface scenario"))?;
    let sheet = focal::FocalSheet::build(&scenario.chart, nu, index, &scenario.grid)
        .map_err(|e| sheet_err(scenario, name, index, e))?;
    let (sheet_chart, v_field) =
        focal::tangent_field_on_sheet(&sheet).map_err(|e| err_at(name, None, e))?;
    let sheet_fam = congruence_core::families::LineFamily::new(sheet_chart, v_field)
        .map_err(|e| err_at(name, None, e))?;
    let mut table = CsvTable::new(
        scenario.grid.dim(),
        &["v_gap", "line_gap", "geodesic_residual"],
    );
    let (mut worst_v, mut worst_line, mut worst_geo): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for u in scenario.grid.points() {
        let v = sheet
            .v_field_raw(&u)
            .map_err(|e| err_at(name, Some(&u), e))?;
        let nu_v = nu.value(&u).map_err(|e| err_at(name, Some(&u), e))?;
        let v_gap = v.distance(&nu_v);
        let y = sheet.value(&u).map_err(|e| err_at(name, Some(&u), e))?;
        let p = scenario
            .chart
            .value(&u)
            .map_err(|e| err_at(name, Some(&u), e))?;
        let line_sheet = congruence_core::OrientedLine::from_point_direction(&y, &v.normalized())
            .map_err(|e| err_at(name, Some(&u), e))?;
        let line_surf = congruence_core::OrientedLine::from_point_direction(&p, &nu_v)
            .map_err(|e| err_at(name, Some(&u), e))?;
        let line_gap = line_sheet.deviation(&line_surf);
        let geo = sheet_fam
            .geodesic_residual(&u)
            .map_err(|e| err_at(name, Some(&u), e))?;
        worst_v = worst_v.max(v_gap);
        worst_line = worst_line.max(line_gap);
        worst_geo = worst_geo.max(geo);
        table.push(&u, &[v_gap, line_gap, geo]);
    }
    let verdict = worst_v < 1e-6 && worst_line < 1e-8 && worst_geo < 1e-4;
    Ok(CheckOutcome {
        name: name.clone(),
        passed: verdict_to_pass(spec, verdict),
        summary: format!(
            "sheet_structure(i={index}): verdict={verdict} (v vs normal {worst_v:.3e} < 1e-6, \
             line equality {worst_line:.3e} < 1e-8, geodesic {worst_geo:.3e} < 1e-4)"
        ),
        table: Some(table),
    })
}

fn curvature_law(
    scenario: &Scenario,
    spec: &CheckSpec,
    ricci: bool,
) -> Result<CheckOutcome, CheckError> {
    let name = &spec.name;
    let tol = spec.tol.unwrap_or(if ricci { 5e-3 } else { 1e-3 });
    let nu = scenario
        .normal
        .as_ref()
        .ok_or_else(|| err_at(name, None, "curvature checks need a hypersurface scenario"))?;
    let i = spec.i.unwrap_or(0);
    let report = if ricci {
        curvature::verify_ricci_law(&scenario.chart, nu, i, &scenario.grid)
            .map_err(|e| sheet_err(scenario, name, i, e))?
            .report
    } else {
        let j = spec.j.unwrap_or(1);
        curvature::verify_sectional_law(&scenario.chart, nu, i, j, &scenario.grid)
            .map_err(|e| sheet_err(scenario, name, i, e))?
    };
    let mut table = CsvTable::new(scenario.grid.dim(), &["lhs", "rhs", "abs_err", "rel_err"]);
    for row in &report.rows {
        table.push(
            &row.params,
            &[row.lhs, row.rhs, row.abs_err(), row.rel_err()],
        );
    }
    let verdict = report.max_rel_err < tol;
    Ok(CheckOutcome {
        name: name.clone(),
        passed: verdict_to_pass(spec, verdict),
        summary: format!(
            "{name}: verdict={verdict} (max rel err {:.3e}, max abs err {:.3e}, tol {tol:.1e})",
            report.max_rel_err, report.max_abs_err
        ),
        table: Some(table),
    })
}

fn e2_eigenrelation(scenario: &Scenario, spec: &CheckSpec) -> Result<CheckOutcome, CheckError> {
    let name = &spec.name;
    let tol = spec.tol.unwrap_or(1e-4);
    let nu = scenario
        .normal
        .as_ref()
        .ok_or_else(|| err_at(name, None, "e2_eigenrelation needs a hypersurface scenario"))?;
    let i = spec.i.unwrap_or(0);
    let j = spec.j.unwrap_or(1);
    let rep = curvature::verify_e2_eigenrelation(&scenario.chart, nu, i, j, &scenario.grid)
        .map_err(|e| sheet_err(scenario, name, i, e))?;
    let mut table = CsvTable::new(scenario.grid.dim(), &["residual", "e2_norm", "mu_plus_s"]);
    for row in &rep.rows {
        table.push(&row.params, &[row.residual, row.e2_norm, row.mu_plus_s]);
    }
    let verdict = rep.max_residual < tol && rep.min_e2_norm > 1e-8 && rep.max_mu_plus_s < 1e-8;
    Ok(CheckOutcome {
        name: name.clone(),
        passed: verdict_to_pass(spec, verdict),
        summary: format!(
            "e2_eigenrelation: verdict={verdict} (residual {:.3e} < {tol:.1e}, min |E2| \
             {:.3e} > 1e-8, |mu + s| {:.3e} < 1e-8)",
            rep.max_residual, rep.min_e2_norm, rep.max_mu_plus_s
        ),
        table: Some(table),
    })
}

fn constant_astigmatism(scenario: &Scenario, spec: &CheckSpec) -> Result<CheckOutcome, CheckError> {
    let name = &spec.name;
    let tol = spec.tol.unwrap_or(5e-3);
    let ds_tol = spec.ds_tol.unwrap_or(1e-3);
    let nu = scenario.normal.as_ref().ok_or_else(|| {
        err_at(
            name,
            None,
            "constant_astigmatism needs a hypersurface scenario",
        )
    })?;
    let points = curvature::constant_astigmatism_limit(&scenario.chart, nu, &scenario.grid, ds_tol)
        .map_err(|e| sheet_err(scenario, name, 0, e))?;
    let mut table = CsvTable::new(scenario.grid.dim(), &["ds", "k_sheet", "minus_inv_s2"]);
    let mut worst: f64 = 0.0;
    for p in &points {
        worst = worst.max((p.sheet_curvature - p.minus_inv_s2).abs());
        table.push(&p.params, &[p.ds, p.sheet_curvature, p.minus_inv_s2]);
    }
    let verdict = !points.is_empty() && worst < tol;
    Ok(CheckOutcome {
        name: name.clone(),
        passed: verdict_to_pass(spec, verdict),
        summary: format!(
            "constant_astigmatism: verdict={verdict} ({} stationary-astigmatism points, max \
             |K + 1/s^2| = {worst:.3e}, tol {tol:.1e})",
            points.len()
        ),
        table: Some(table),
    })
}
