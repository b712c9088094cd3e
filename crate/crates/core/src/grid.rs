//! Rectilinear sampling grids in parameter space.
//!
//! A grid is a list of axes, each `(min, max, count)` with nodes at the
//! `count` evenly spaced values including both endpoints. Points enumerate
//! in row-major order (last axis fastest), which fixes the order of every
//! report built from a grid.

use crate::families::DomainBox;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridAxis {
    pub fn new(min: f64, max: f64, count: usize) -> Self {
        assert!(count >= 2, "grid axis needs at least 2 nodes");
        assert!(max > min, "grid axis needs max > min");
        GridAxis { min, max, count }
    }

    pub fn value(&self, i: usize) -> f64 {
        self.min + (self.max - self.min) * (i as f64) / ((self.count - 1) as f64)
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / ((self.count - 1) as f64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    axes: Vec<GridAxis>,
}

impl Grid {
    pub fn new(axes: Vec<GridAxis>) -> Self {
        Grid { axes }
    }

    /// Uniform grid over a domain box with `count` nodes per axis.
    pub fn over(domain: &DomainBox, count: usize) -> Self {
        Grid {
            axes: domain
                .lo()
                .iter()
                .zip(domain.hi().iter())
                .map(|(&a, &b)| GridAxis::new(a, b, count))
                .collect(),
        }
    }

    /// Uniform grid over the box shrunk by `margin` on every side, so
    /// finite-difference stencils at grid nodes stay inside the domain.
    pub fn over_inset(domain: &DomainBox, count: usize, margin: f64) -> Self {
        Grid {
            axes: domain
                .lo()
                .iter()
                .zip(domain.hi().iter())
                .map(|(&a, &b)| GridAxis::new(a + margin, b - margin, count))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[GridAxis] {
        &self.axes
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        let mut idx = flat;
        let mut out = vec![0.0; self.dim()];
        for (d, axis) in self.axes.iter().enumerate().rev() {
            out[d] = axis.value(idx % axis.count);
            idx /= axis.count;
        }
        out
    }

    /// Row-major enumeration of all grid points.
    pub fn points(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }

    /// The flat index of the neighbor of `flat` along `axis` (or `None` at
    /// the boundary). Step `+1` or `-1`.
    pub fn neighbor(&self, flat: usize, axis: usize, step: isize) -> Option<usize> {
        let mut coords = vec![0usize; self.dim()];
        let mut idx = flat;
        for (d, ax) in self.axes.iter().enumerate().rev() {
            coords[d] = idx % ax.count;
            idx /= ax.count;
        }
        let c = coords[axis] as isize + step;
        if c < 0 || c as usize >= self.axes[axis].count {
            return None;
        }
        coords[axis] = c as usize;
        let mut flat = 0;
        for (d, ax) in self.axes.iter().enumerate() {
            flat = flat * ax.count + coords[d];
        }
        Some(flat)
    }
}
