//! Deterministic report writers: CSV tables and OBJ meshes.
//!
//! Numbers print with 17 significant digits in scientific notation
//! (`{:.16e}`), locale-free, so identical runs produce byte-identical
//! files.

use std::io::Write;
use std::path::Path;

use congruence_core::grid::Grid;
use congruence_core::VecA;

/// Fixed float formatting used in every generated file.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// One CSV table: named columns after the `u1..uk` parameter columns.
pub struct CsvTable {
    pub columns: Vec<String>,
    pub rows: Vec<(Vec<f64>, Vec<f64>)>,
}

impl CsvTable {
    pub fn new(param_dim: usize, columns: &[&str]) -> Self {
        let mut cols: Vec<String> = (1..=param_dim).map(|i| format!("u{i}")).collect();
        cols.extend(columns.iter().map(|c| c.to_string()));
        CsvTable {
            columns: cols,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, params: &[f64], values: &[f64]) {
        self.rows.push((params.to_vec(), values.to_vec()));
    }

    pub fn write_to(&self, path: &Path) -> std::io::Result<()> {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for (params, values) in &self.rows {
            let fields: Vec<String> = params
                .iter()
                .chain(values.iter())
                .map(|x| fmt(*x))
                .collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        std::fs::write(path, out)
    }
}

#[derive(Debug)]
pub enum MeshError {
    UnsupportedDim { grid_dim: usize, ambient: usize },
    Io(std::io::Error),
}

impl std::fmt::Display for MeshError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MeshError::UnsupportedDim { grid_dim, ambient } => write!(
                f,
                "mesh export supports 2-parameter charts in R^3 only \
                 (got {grid_dim} parameters in R^{ambient})"
            ),
            MeshError::Io(e) => write!(f, "mesh io error: {e}"),
        }
    }
}

impl std::error::Error for MeshError {}

impl From<std::io::Error> for MeshError {
    fn from(e: std::io::Error) -> Self {
        MeshError::Io(e)
    }
}

/// Write a grid of sampled chart points as a triangulated OBJ mesh:
/// vertices in row-major grid order, each quad split into two triangles
/// with consistent winding, header comments recording the scenario and
/// grid shape.
pub fn write_obj<F>(
    path: &Path,
    scenario_name: &str,
    grid: &Grid,
    mut sample: F,
) -> Result<(), MeshError>
where
    F: FnMut(&[f64]) -> VecA,
{
    if grid.dim() != 2 {
        return Err(MeshError::UnsupportedDim {
            grid_dim: grid.dim(),
            ambient: 0,
        });
    }
    let (rows, cols) = (grid.axes()[0].count, grid.axes()[1].count);
    let mut vertices: Vec<VecA> = Vec::with_capacity(grid.len());
    for u in grid.points() {
        let p = sample(&u);
        if p.dim() != 3 {
            return Err(MeshError::UnsupportedDim {
                grid_dim: 2,
                ambient: p.dim(),
            });
        }
        vertices.push(p);
    }
    let mut out = String::new();
    out.push_str(&format!("# scenario: {scenario_name}\n"));
    out.push_str(&format!("# grid: {rows}x{cols}\n"));
    for v in &vertices {
        out.push_str(&format!("v {} {} {}\n", fmt(v[0]), fmt(v[1]), fmt(v[2])));
    }
    // OBJ indices are 1-based; quads split along the (a, c) diagonal.
    for i in 0..rows - 1 {
        for j in 0..cols - 1 {
            let a = i * cols + j + 1;
            let b = (i + 1) * cols + j + 1;
            let c = (i + 1) * cols + j + 2;
            let d = i * cols + j + 2;
            out.push_str(&format!("f {a} {b} {c}\n"));
            out.push_str(&format!("f {a} {c} {d}\n"));
        }
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(out.as_bytes())?;
    Ok(())
}
