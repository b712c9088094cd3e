//! Symmetric eigendecomposition by cyclic Jacobi rotations.
//!
//! Dimensions are capped at [`MAX_EIGEN_DIM`](super::MAX_EIGEN_DIM); within
//! that range Jacobi is simple, backward stable, and produces eigenvectors
//! orthonormal to machine precision by construction.

use super::{Mat, NumericsError, MAX_EIGEN_DIM};

/// Result of [`sym_eigen`]: eigenvalues ascending, eigenvectors as the
/// columns of an orthonormal matrix, `values[i]` pairing with `vectors.col(i)`.
#[derive(Clone, Debug)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Mat,
}

/// Relative symmetry tolerance on the input: `max|M - Mᵀ| < 1e-10 · max|M|`.
const SYM_TOL_REL: f64 = 1e-10;

/// Eigendecomposition of a small symmetric matrix.
///
/// Errors with [`NumericsError::NonSymmetric`] when the input exceeds the
/// symmetry tolerance and [`NumericsError::NoConvergence`] if the rotation
/// sweeps fail to annihilate the off-diagonal (cap `100·k²` sweeps, far more
/// than Jacobi ever needs).
pub fn sym_eigen(m: &Mat) -> Result<SymEigen, NumericsError> {
    let k = m.rows();
    if m.cols() != k {
        return Err(NumericsError::DimensionMismatch(format!(
            "sym_eigen needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if k > MAX_EIGEN_DIM {
        return Err(NumericsError::DimensionCap {
            got: k,
            cap: MAX_EIGEN_DIM,
        });
    }
    let scale = m.max_abs();
    let deviation = m.asymmetry();
    if scale > 0.0 && deviation >= SYM_TOL_REL * scale {
        return Err(NumericsError::NonSymmetric {
            deviation,
            limit: SYM_TOL_REL * scale,
        });
    }

    let mut a = m.clone();
    // Work on the symmetrized part so tiny asymmetries cannot bias sweeps.
    for i in 0..k {
        for j in (i + 1)..k {
            let s = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = s;
            a[(j, i)] = s;
        }
    }
    let mut v = Mat::identity(k);

    if k <= 1 {
        return Ok(sorted(a, v, k));
    }

    let max_sweeps = 100 * k * k;
    let stop = 1e-15 * scale.max(f64::MIN_POSITIVE);
    let mut converged = false;
    for _sweep in 0..max_sweeps {
        let mut off: f64 = 0.0;
        for i in 0..k {
            for j in (i + 1)..k {
                off = off.max(a[(i, j)].abs());
            }
        }
        if off <= stop {
            converged = true;
            break;
        }
        for p in 0..k {
            for q in (p + 1)..k {
                let apq = a[(p, q)];
                if apq.abs() <= stop * 1e-2 {
                    continue;
                }
                // Classic Jacobi rotation zeroing a[p][q].
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                let app = a[(p, p)];
                let aqq = a[(q, q)];
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for i in 0..k {
                    if i != p && i != q {
                        let aip = a[(i, p)];
                        let aiq = a[(i, q)];
                        a[(i, p)] = aip - s * (aiq + tau * aip);
                        a[(i, q)] = aiq + s * (aip - tau * aiq);
                        a[(p, i)] = a[(i, p)];
                        a[(q, i)] = a[(i, q)];
                    }
                }
                for i in 0..k {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip - s * (viq + tau * vip);
                    v[(i, q)] = viq + s * (vip - tau * viq);
                }
            }
        }
    }
    if !converged {
        // Final check: the loop may have exited on the sweep budget right
        // after reaching the threshold.
        let mut off: f64 = 0.0;
        for i in 0..k {
            for j in (i + 1)..k {
                off = off.max(a[(i, j)].abs());
            }
        }
        if off > stop {
            return Err(NumericsError::NoConvergence(max_sweeps));
        }
    }
    Ok(sorted(a, v, k))
}

fn sorted(a: Mat, v: Mat, k: usize) -> SymEigen {
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap());
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Mat::zeros(k, k);
    for (new_j, &old_j) in order.iter().enumerate() {
        for i in 0..k {
            vectors[(i, new_j)] = v[(i, old_j)];
        }
    }
    SymEigen { values, vectors }
}
