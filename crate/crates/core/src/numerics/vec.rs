//! Dense ambient vectors.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

/// A point or vector of `R^(n+1)` with `n + 1` ambient coordinates.
///
/// The length is fixed per engine instance; mixing lengths in arithmetic is
/// a programming error and panics in debug builds.
#[derive(Clone, Debug, PartialEq)]
pub struct VecA(Vec<f64>);

impl VecA {
    pub fn new(components: Vec<f64>) -> Self {
        VecA(components)
    }

    pub fn zeros(dim: usize) -> Self {
        VecA(vec![0.0; dim])
    }

    /// Standard basis vector `e_i`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        VecA(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn dot(&self, other: &VecA) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn normalized(&self) -> VecA {
        let n = self.norm();
        self.scale(1.0 / n)
    }

    pub fn scale(&self, s: f64) -> VecA {
        VecA(self.0.iter().map(|x| x * s).collect())
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: f64, other: &VecA) -> VecA {
        debug_assert_eq!(self.dim(), other.dim());
        VecA(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + s * b)
                .collect(),
        )
    }

    /// Component of `self` orthogonal to the *unit* vector `u`.
    pub fn reject_from_unit(&self, u: &VecA) -> VecA {
        self.add_scaled(-self.dot(u), u)
    }

    pub fn distance(&self, other: &VecA) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl From<Vec<f64>> for VecA {
    fn from(v: Vec<f64>) -> Self {
        VecA(v)
    }
}

impl From<&[f64]> for VecA {
    fn from(v: &[f64]) -> Self {
        VecA(v.to_vec())
    }
}

impl Index<usize> for VecA {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for VecA {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for &VecA {
    type Output = VecA;
    fn add(self, rhs: &VecA) -> VecA {
        self.add_scaled(1.0, rhs)
    }
}

impl Sub for &VecA {
    type Output = VecA;
    fn sub(self, rhs: &VecA) -> VecA {
        self.add_scaled(-1.0, rhs)
    }
}

impl Mul<f64> for &VecA {
    type Output = VecA;
    fn mul(self, s: f64) -> VecA {
        self.scale(s)
    }
}

impl Neg for &VecA {
    type Output = VecA;
    fn neg(self) -> VecA {
        self.scale(-1.0)
    }
}
