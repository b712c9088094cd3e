//! Second-order jets of vector-valued maps of several parameters, with
//! analytic and central-finite-difference backends.

use std::sync::Arc;

use super::{NumericsError, VecA, DEFAULT_FD_STEP};

/// Value, first and mixed second partials of a map `R^k → R^(n+1)` at a
/// parameter point. `first[i] = ∂ᵢ map`, `second[i][j] = ∂ᵢ∂ⱼ map`.
#[derive(Clone, Debug)]
pub struct Jet2 {
    pub value: VecA,
    pub first: Vec<VecA>,
    pub second: Vec<Vec<VecA>>,
}

impl Jet2 {
    pub fn params_dim(&self) -> usize {
        self.first.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.value.dim()
    }

    /// Max component deviation between `second[i][j]` and `second[j][i]`.
    pub fn mixed_asymmetry(&self) -> f64 {
        let k = self.params_dim();
        let mut worst: f64 = 0.0;
        for i in 0..k {
            for j in (i + 1)..k {
                worst = worst.max((&self.second[i][j] - &self.second[j][i]).norm_inf());
            }
        }
        worst
    }

    /// Replace the mixed second partials by their symmetric part.
    pub fn symmetrized(mut self) -> Jet2 {
        let k = self.params_dim();
        for i in 0..k {
            for j in (i + 1)..k {
                let avg = (&self.second[i][j] + &self.second[j][i]).scale(0.5);
                self.second[i][j] = avg.clone();
                self.second[j][i] = avg;
            }
        }
        self
    }

    /// Directional derivative along a parameter-space direction.
    pub fn directional_first(&self, dir: &[f64]) -> VecA {
        let mut out = VecA::zeros(self.ambient_dim());
        for (i, d) in dir.iter().enumerate() {
            out = out.add_scaled(*d, &self.first[i]);
        }
        out
    }

    /// Second derivative contracted with two parameter-space directions.
    pub fn directional_second(&self, dir_a: &[f64], dir_b: &[f64]) -> VecA {
        let mut out = VecA::zeros(self.ambient_dim());
        for (i, da) in dir_a.iter().enumerate() {
            for (j, db) in dir_b.iter().enumerate() {
                out = out.add_scaled(da * db, &self.second[i][j]);
            }
        }
        out
    }
}

/// Differentiation backend for charts and fields.
///
/// `Analytic` requires the owner to hold a jet (or derivative) callback;
/// `CentralFd` differentiates the plain value callback with second-order
/// central stencils using step `rel_step · (1 + |uᵢ|)` per axis.
#[derive(Clone, Debug)]
pub enum DiffBackend {
    Analytic,
    CentralFd { rel_step: f64 },
}

impl DiffBackend {
    pub fn central_fd() -> Self {
        DiffBackend::CentralFd {
            rel_step: DEFAULT_FD_STEP,
        }
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self, DiffBackend::Analytic)
    }
}

impl Default for DiffBackend {
    fn default() -> Self {
        DiffBackend::central_fd()
    }
}

/// A chart-map callback: either a plain value map (differentiated by finite
/// differences) or a full analytic jet.
#[derive(Clone)]
pub enum MapCallback {
    Value(Arc<dyn Fn(&[f64]) -> VecA + Send + Sync>),
    Jet(Arc<dyn Fn(&[f64]) -> Jet2 + Send + Sync>),
}

impl MapCallback {
    pub fn value(&self, params: &[f64]) -> VecA {
        match self {
            MapCallback::Value(f) => f(params),
            MapCallback::Jet(f) => f(params).value,
        }
    }
}

impl std::fmt::Debug for MapCallback {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MapCallback::Value(_) => write!(f, "MapCallback::Value(..)"),
            MapCallback::Jet(_) => write!(f, "MapCallback::Jet(..)"),
        }
    }
}

/// Per-axis finite-difference steps, scaled to the parameter magnitude.
pub fn fd_steps(params: &[f64], rel_step: f64) -> Vec<f64> {
    params.iter().map(|u| rel_step * (1.0 + u.abs())).collect()
}

/// Check the `2h` stencil margin against an axis-aligned box; `lo`/`hi` may
/// be unbounded (`-inf`/`inf`).
pub fn check_margin(
    params: &[f64],
    steps: &[f64],
    lo: &[f64],
    hi: &[f64],
) -> Result<(), NumericsError> {
    for (axis, ((&u, &h), (&a, &b))) in params
        .iter()
        .zip(steps.iter())
        .zip(lo.iter().zip(hi.iter()))
        .enumerate()
    {
        if u - 2.0 * h < a || u + 2.0 * h > b {
            return Err(NumericsError::DomainMargin {
                axis,
                needed: 2.0 * h,
            });
        }
    }
    Ok(())
}

/// Value, first and second derivatives of `map` at `params`.
///
/// The central-difference backend uses second-order stencils: the standard
/// three-point formulas on each axis and the four-corner cross stencil for
/// mixed partials (the corner points of the 3×3 neighborhood), all `O(h²)`
/// accurate. The analytic backend passes the jet callback through. Bounds
/// `lo`/`hi` guard the stencil margin.
pub fn jet2_eval(
    map: &MapCallback,
    params: &[f64],
    backend: &DiffBackend,
    lo: &[f64],
    hi: &[f64],
) -> Result<Jet2, NumericsError> {
    match backend {
        DiffBackend::Analytic => match map {
            MapCallback::Jet(f) => Ok(f(params)),
            MapCallback::Value(_) => Err(NumericsError::MissingJetCallback),
        },
        DiffBackend::CentralFd { rel_step } => {
            let k = params.len();
            let steps = fd_steps(params, *rel_step);
            check_margin(params, &steps, lo, hi)?;
            let eval = |p: &[f64]| -> VecA { map.value(p) };
            let center = eval(params);

            let mut plus = Vec::with_capacity(k);
            let mut minus = Vec::with_capacity(k);
            for i in 0..k {
                let mut p = params.to_vec();
                p[i] += steps[i];
                plus.push(eval(&p));
                p[i] = params[i] - steps[i];
                minus.push(eval(&p));
            }

            let first: Vec<VecA> = (0..k)
                .map(|i| (&plus[i] - &minus[i]).scale(0.5 / steps[i]))
                .collect();

            let mut second = vec![vec![VecA::zeros(center.dim()); k]; k];
            for i in 0..k {
                // f(u+h) - 2 f(u) + f(u-h).
                second[i][i] = (&(&plus[i] + &minus[i]) - &center.scale(2.0))
                    .scale(1.0 / (steps[i] * steps[i]));
            }
            for i in 0..k {
                for j in (i + 1)..k {
                    let mut pp = params.to_vec();
                    pp[i] += steps[i];
                    pp[j] += steps[j];
                    let fpp = eval(&pp);
                    pp[j] = params[j] - steps[j];
                    let fpm = eval(&pp);
                    pp[i] = params[i] - steps[i];
                    let fmm = eval(&pp);
                    pp[j] = params[j] + steps[j];
                    let fmp = eval(&pp);
                    let mixed =
                        (&(&fpp - &fpm) - &(&fmp - &fmm)).scale(0.25 / (steps[i] * steps[j]));
                    second[i][j] = mixed.clone();
                    second[j][i] = mixed;
                }
            }
            Ok(Jet2 {
                value: center,
                first,
                second,
            })
        }
    }
}

/// First derivative of a vector-valued closure along one axis, central.
pub fn central_first<F: Fn(&[f64]) -> VecA>(f: &F, params: &[f64], axis: usize, h: f64) -> VecA {
    let mut p = params.to_vec();
    p[axis] += h;
    let fp = f(&p);
    p[axis] = params[axis] - h;
    let fm = f(&p);
    (&fp - &fm).scale(0.5 / h)
}

/// First derivative of a vector-valued closure along a parameter direction.
pub fn central_directional<F: Fn(&[f64]) -> VecA>(
    f: &F,
    params: &[f64],
    dir: &[f64],
    h: f64,
) -> VecA {
    let plus: Vec<f64> = params.iter().zip(dir).map(|(u, d)| u + h * d).collect();
    let minus: Vec<f64> = params.iter().zip(dir).map(|(u, d)| u - h * d).collect();
    (&f(&plus) - &f(&minus)).scale(0.5 / h)
}

/// Scalar variant of [`central_directional`].
pub fn central_directional_scalar<F: Fn(&[f64]) -> f64>(
    f: &F,
    params: &[f64],
    dir: &[f64],
    h: f64,
) -> f64 {
    let plus: Vec<f64> = params.iter().zip(dir).map(|(u, d)| u + h * d).collect();
    let minus: Vec<f64> = params.iter().zip(dir).map(|(u, d)| u - h * d).collect();
    (f(&plus) - f(&minus)) * 0.5 / h
}
