//! Scenario configuration: JSON schema and validation.
//!
//! A scenario names a catalog surface, a unit field over it, a sampling
//! grid, a differentiation backend, a list of checks, and an output
//! directory. A top-level `"comment"` key is allowed and ignored. Example:
//!
//! ```json
//! {
//!   "name": "ellipsoid_sectional",
//!   "surface": { "id": "ellipsoid", "params": [1.0, 1.5, 2.0] },
//!   "field": { "kind": "normal" },
//!   "grid": [
//!     { "min": 0.55, "max": 1.05, "count": 40 },
//!     { "min": 0.45, "max": 0.95, "count": 40 }
//!   ],
//!   "backend": { "mode": "analytic" },
//!   "checks": [ { "name": "sectional_law", "tol": 1e-3 } ],
//!   "output_dir": "out/ellipsoid_sectional"
//! }
//! ```

use serde::Deserialize;

use congruence_core::catalog::{self, CatalogError};
use congruence_core::families::{Chart, FieldKind, LineFamily, UnitField};
use congruence_core::grid::{Grid, GridAxis};
use congruence_core::numerics::DiffBackend;
use std::sync::Arc;

/// Check names the runner knows how to execute.
pub const REGISTERED_CHECKS: &[&str] = &[
    "is_isotropic",
    "geodesic_residual",
    "frobenius_residual",
    "potential",
    "focal_oracle",
    "tangent_focality",
    "sheet_structure",
    "sectional_law",
    "ricci_law",
    "e2_eigenrelation",
    "constant_astigmatism",
];

#[derive(Debug)]
pub enum ConfigError {
    Parse(String),
    Validation(String),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Parse(m) => write!(f, "config parse error: {m}"),
            ConfigError::Validation(m) => write!(f, "config validation error: {m}"),
        }
    }
}

impl std::error::Error for ConfigError {}

impl From<CatalogError> for ConfigError {
    fn from(e: CatalogError) -> Self {
        ConfigError::Validation(e.to_string())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Free-form note, ignored by the engine.
    #[serde(default)]
    #[allow(dead_code)]
    pub comment: Option<String>,
    pub name: String,
    pub surface: SurfaceSpec,
    pub field: FieldSpec,
    pub grid: Vec<AxisSpec>,
    #[serde(default)]
    pub backend: BackendSpec,
    pub checks: Vec<CheckSpec>,
    pub output_dir: String,
    #[serde(default)]
    pub export: Vec<ExportSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    pub id: String,
    #[serde(default)]
    pub params: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    /// `normal`, `meridian`, `great_circle`, `latitude`, `gradient_of`,
    /// or `radial`.
    pub kind: String,
    /// Linear-form coefficients for `gradient_of`, center for `radial`.
    #[serde(default)]
    pub params: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackendSpec {
    /// `analytic` or `central_fd`.
    pub mode: String,
    #[serde(default)]
    pub step: Option<f64>,
}

impl Default for BackendSpec {
    fn default() -> Self {
        BackendSpec {
            mode: "analytic".to_string(),
            step: None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub name: String,
    /// Pass tolerance; checks fall back to their documented defaults.
    #[serde(default)]
    pub tol: Option<f64>,
    /// Expected verdict for verdict-style checks (`is_isotropic`): the
    /// scenario passes when the computed verdict matches.
    #[serde(default)]
    pub expect: Option<bool>,
    /// Sheet indices for the curvature checks (0-based; defaults 0 and 1).
    #[serde(default)]
    pub i: Option<usize>,
    #[serde(default)]
    pub j: Option<usize>,
    /// Stationarity gate for `constant_astigmatism`.
    #[serde(default)]
    pub ds_tol: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExportSpec {
    /// `surface` or `sheet`.
    pub what: String,
    /// Sheet index when `what = "sheet"`.
    #[serde(default)]
    pub index: Option<usize>,
    /// Output path relative to the scenario output directory.
    pub path: String,
}

/// Everything the runner needs, instantiated and validated.
pub struct Scenario {
    pub config: ScenarioConfig,
    pub chart: Arc<Chart>,
    pub field: UnitField,
    pub family: LineFamily,
    pub normal: Option<UnitField>,
    pub grid: Grid,
}

pub fn parse(text: &str) -> Result<ScenarioConfig, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
}

pub fn instantiate(config: ScenarioConfig) -> Result<Scenario, ConfigError> {
    // Grid invariants first: at least 4 nodes per axis.
    for (i, ax) in config.grid.iter().enumerate() {
        if ax.count < 4 {
            return Err(ConfigError::Validation(format!(
                "grid axis {i}: count {} below the minimum of 4",
                ax.count
            )));
        }
        if ax.max <= ax.min {
            return Err(ConfigError::Validation(format!(
                "grid axis {i}: max must exceed min"
            )));
        }
    }
    for check in &config.checks {
        if !REGISTERED_CHECKS.contains(&check.name.as_str()) {
            return Err(ConfigError::Validation(format!(
                "unknown check {:?} (registered: {})",
                check.name,
                REGISTERED_CHECKS.join(", ")
            )));
        }
        // Sheet indices must address one of the k radii of curvature.
        let k = config.grid.len();
        for (label, value) in [("i", check.i), ("j", check.j)] {
            if let Some(idx) = value {
                if idx >= k {
                    return Err(ConfigError::Validation(format!(
                        "check {:?}: sheet index {label} = {idx} out of range (chart has {k} \
                         parameters)",
                        check.name
                    )));
                }
            }
        }
    }

    let built = catalog::surface(&config.surface.id, &config.surface.params)?;
    let analytic_chart = built.chart.clone();
    let analytic_normal = built.normal_field();

    // Backend selection: the catalog is analytic; central_fd wraps the
    // chart value map and differentiates it numerically.
    let (chart, normal): (Arc<Chart>, UnitField) = match config.backend.mode.as_str() {
        "analytic" => (analytic_chart.clone(), analytic_normal.clone()),
        "central_fd" => {
            let step = config.backend.step.unwrap_or(1e-5);
            let inner = analytic_chart.clone();
            let chart_fd = Chart::new_numeric(
                inner.dim(),
                inner.ambient_dim(),
                inner.domain().clone(),
                step,
                move |u| inner.value(u).expect("value inside domain"),
            );
            let nv = analytic_normal.clone();
            let normal_fd = UnitField::from_closures(
                chart_fd.clone(),
                FieldKind::Normal,
                DiffBackend::CentralFd { rel_step: step },
                move |u: &[f64]| nv.value(u).expect("normal inside domain"),
                None,
            );
            (chart_fd, normal_fd)
        }
        other => {
            return Err(ConfigError::Validation(format!(
                "unknown backend mode {other:?} (analytic | central_fd)"
            )));
        }
    };

    let field = match config.field.kind.as_str() {
        "normal" => normal.clone(),
        "meridian" | "great_circle" | "latitude" => {
            catalog::named_tangent_field(&config.field.kind, &chart)?
        }
        "gradient_of" => {
            if config.field.params.len() != chart.ambient_dim() {
                return Err(ConfigError::Validation(format!(
                    "gradient_of needs {} coefficients",
                    chart.ambient_dim()
                )));
            }
            catalog::gradient_field(&chart, &config.field.params)
        }
        "radial" => {
            if config.field.params.len() != chart.ambient_dim() {
                return Err(ConfigError::Validation(format!(
                    "radial needs a center with {} coordinates",
                    chart.ambient_dim()
                )));
            }
            catalog::radial_field(&chart, &config.field.params)
        }
        other => {
            return Err(ConfigError::Validation(format!(
                "unknown field kind {other:?}"
            )));
        }
    };

    if config.grid.len() != chart.dim() {
        return Err(ConfigError::Validation(format!(
            "grid has {} axes but the surface chart has {} parameters",
            config.grid.len(),
            chart.dim()
        )));
    }
    let domain = chart.domain();
    for (i, ax) in config.grid.iter().enumerate() {
        if ax.min < domain.lo()[i] || ax.max > domain.hi()[i] {
            return Err(ConfigError::Validation(format!(
                "grid axis {i} [{}, {}] exceeds the chart domain [{}, {}]",
                ax.min,
                ax.max,
                domain.lo()[i],
                domain.hi()[i]
            )));
        }
    }
    let grid = Grid::new(
        config
            .grid
            .iter()
            .map(|a| GridAxis::new(a.min, a.max, a.count))
            .collect(),
    );

    let family = LineFamily::new(chart.clone(), field.clone())
        .map_err(|e| ConfigError::Validation(e.to_string()))?;

    // Keep the normal field around for the hypersurface checks; only
    // meaningful for hypersurface charts.
    let normal_opt = (chart.dim() + 1 == chart.ambient_dim()).then_some(normal);

    Ok(Scenario {
        config,
        chart,
        field,
        family,
        normal: normal_opt,
        grid,
    })
}
