//! Small dense matrices, row-major.

use super::{NumericsError, VecA};

/// Dense real matrix with shape fixed at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = if r > 0 { rows[0].len() } else { 0 };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            debug_assert_eq!(row.len(), c);
            data.extend_from_slice(row);
        }
        Mat {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Stack ambient vectors as matrix columns.
    pub fn from_cols(cols: &[VecA]) -> Self {
        let c = cols.len();
        let r = if c > 0 { cols[0].dim() } else { 0 };
        let mut m = Mat::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            debug_assert_eq!(col.dim(), r);
            for i in 0..r {
                m[(i, j)] = col[i];
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> VecA {
        VecA::new((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(l, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Gram matrix `MᵀM`.
    pub fn gram(&self) -> Mat {
        let mut g = Mat::zeros(self.cols, self.cols);
        for a in 0..self.cols {
            for b in a..self.cols {
                let mut s = 0.0;
                for i in 0..self.rows {
                    s += self[(i, a)] * self[(i, b)];
                }
                g[(a, b)] = s;
                g[(b, a)] = s;
            }
        }
        g
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
    }

    /// Max |M_ij − M_ji| over all pairs.
    pub fn asymmetry(&self) -> f64 {
        debug_assert_eq!(self.rows, self.cols);
        let mut d: f64 = 0.0;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                d = d.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        d
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> f64 {
        debug_assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = 1.0;
        for k in 0..n {
            let mut piv = k;
            for i in (k + 1)..n {
                if a[(i, k)].abs() > a[(piv, k)].abs() {
                    piv = i;
                }
            }
            if a[(piv, k)] == 0.0 {
                return 0.0;
            }
            if piv != k {
                for j in 0..n {
                    let tmp = a[(k, j)];
                    a[(k, j)] = a[(piv, j)];
                    a[(piv, j)] = tmp;
                }
                det = -det;
            }
            det *= a[(k, k)];
            for i in (k + 1)..n {
                let f = a[(i, k)] / a[(k, k)];
                for j in k..n {
                    a[(i, j)] -= f * a[(k, j)];
                }
            }
        }
        det
    }

    /// Solve the square system `self · x = b` by LU with partial pivoting.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>, NumericsError> {
        debug_assert_eq!(self.rows, self.cols);
        debug_assert_eq!(self.rows, b.len());
        let n = self.rows;
        let mut a = self.clone();
        let mut x = b.to_vec();
        for k in 0..n {
            let mut piv = k;
            for i in (k + 1)..n {
                if a[(i, k)].abs() > a[(piv, k)].abs() {
                    piv = i;
                }
            }
            let p = a[(piv, k)];
            if p.abs() < 1e-300 {
                return Err(NumericsError::SingularSystem(p.abs()));
            }
            if piv != k {
                for j in 0..n {
                    let tmp = a[(k, j)];
                    a[(k, j)] = a[(piv, j)];
                    a[(piv, j)] = tmp;
                }
                x.swap(k, piv);
            }
            for i in (k + 1)..n {
                let f = a[(i, k)] / a[(k, k)];
                if f == 0.0 {
                    continue;
                }
                for j in k..n {
                    a[(i, j)] -= f * a[(k, j)];
                }
                x[i] -= f * x[k];
            }
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in (i + 1)..n {
                s -= a[(i, j)] * x[j];
            }
            x[i] = s / a[(i, i)];
        }
        Ok(x)
    }

    /// Least-squares solution of `self · x ≈ b` via the normal equations.
    ///
    /// Adequate for the well-conditioned, low-dimensional Jacobians this
    /// crate works with (condition numbers well below 1e6).
    pub fn least_squares(&self, b: &VecA) -> Result<Vec<f64>, NumericsError> {
        debug_assert_eq!(self.rows, b.dim());
        let g = self.gram();
        let tb = self.transpose().mul_vec(b.as_slice());
        g.solve(&tb)
    }

    /// Orthogonal projection of `b` onto the column span of `self`.
    pub fn project_onto_columns(&self, b: &VecA) -> Result<VecA, NumericsError> {
        let x = self.least_squares(b)?;
        Ok(VecA::new(self.mul_vec(&x)))
    }

    /// Singular values, ascending, via the eigenvalues of `MᵀM`.
    pub fn singular_values(&self) -> Result<Vec<f64>, NumericsError> {
        let g = self.gram();
        let eig = super::sym_eigen(&g)?;
        Ok(eig.values.iter().map(|l| l.max(0.0).sqrt()).collect())
    }

    pub fn min_singular_value(&self) -> Result<f64, NumericsError> {
        Ok(self.singular_values()?[0])
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Gram–Schmidt with pivoting: orthonormal basis of the column span.
///
/// Columns whose residual norm falls below `tol` are dropped, so the result
/// has exactly `rank` vectors.
pub fn orthonormalize(vectors: &[VecA], tol: f64) -> Vec<VecA> {
    let mut basis: Vec<VecA> = Vec::new();
    // Pivot: always take the remaining vector with the largest residual.
    let mut residuals: Vec<VecA> = vectors.to_vec();
    let mut used = vec![false; vectors.len()];
    for _ in 0..vectors.len() {
        let mut best = None;
        let mut best_norm = tol;
        for (i, r) in residuals.iter().enumerate() {
            if !used[i] && r.norm() > best_norm {
                best_norm = r.norm();
                best = Some(i);
            }
        }
        let Some(i) = best else { break };
        used[i] = true;
        let e = residuals[i].normalized();
        for (j, r) in residuals.iter_mut().enumerate() {
            if !used[j] {
                *r = r.reject_from_unit(&e);
            }
        }
        basis.push(e);
    }
    basis
}

/// Orthonormal basis of the orthogonal complement of `span(vectors)` in the
/// ambient space. Used for normal frames of immersed charts.
pub fn orthonormal_complement(vectors: &[VecA], ambient: usize) -> Vec<VecA> {
    let span = orthonormalize(vectors, 1e-12);
    // Extend the span by standard basis vectors (largest residual first);
    // the added directions are the complement.
    let mut residuals: Vec<VecA> = (0..ambient)
        .map(|i| {
            let mut e = VecA::basis(ambient, i);
            for s in &span {
                e = e.reject_from_unit(s);
            }
            e
        })
        .collect();
    let mut complement: Vec<VecA> = Vec::with_capacity(ambient - span.len());
    while span.len() + complement.len() < ambient {
        let (best, norm) = residuals
            .iter()
            .enumerate()
            .map(|(i, w)| (i, w.norm()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .expect("ambient basis exhausted");
        if norm < 1e-12 {
            break;
        }
        let e = residuals[best].normalized();
        for w in residuals.iter_mut() {
            *w = w.reject_from_unit(&e);
        }
        complement.push(e);
    }
    complement
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_roundtrip() {
        let a = Mat::from_rows(&[
            vec![2.0, 1.0, 0.0],
            vec![1.0, 3.0, 1.0],
            vec![0.0, 1.0, 4.0],
        ]);
        let x0 = vec![1.0, -2.0, 0.5];
        let b = a.mul_vec(&x0);
        let x = a.solve(&b).unwrap();
        for i in 0..3 {
            assert!((x[i] - x0[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn det_of_triangularizable() {
        let a = Mat::from_rows(&[vec![0.0, 2.0], vec![3.0, 0.0]]);
        assert!((a.det() + 6.0).abs() < 1e-14);
    }

    #[test]
    fn complement_is_orthogonal_and_complete() {
        let v1 = VecA::new(vec![1.0, 0.0, 1.0, 0.0]);
        let v2 = VecA::new(vec![0.0, 1.0, 0.0, 0.0]);
        let comp = orthonormal_complement(&[v1.clone(), v2.clone()], 4);
        assert_eq!(comp.len(), 2);
        for c in &comp {
            assert!(c.dot(&v1).abs() < 1e-12);
            assert!(c.dot(&v2).abs() < 1e-12);
            assert!((c.norm() - 1.0).abs() < 1e-12);
        }
        assert!(comp[0].dot(&comp[1]).abs() < 1e-12);
    }

    #[test]
    fn least_squares_projects() {
        let j = Mat::from_cols(&[
            VecA::new(vec![1.0, 0.0, 0.0]),
            VecA::new(vec![0.0, 2.0, 0.0]),
        ]);
        let b = VecA::new(vec![3.0, 4.0, 5.0]);
        let p = j.project_onto_columns(&b).unwrap();
        assert!(p.distance(&VecA::new(vec![3.0, 4.0, 0.0])) < 1e-12);
    }
}
