//! Shared fixtures for the kernel benchmarks.

use congruence_core::catalog::{self, CatalogSurface};
use congruence_core::families::LineFamily;
use congruence_core::numerics::Mat;
use congruence_core::rng::SplitMix64;

/// Random symmetric matrix with entries in [-3, 3].
pub fn random_symmetric(k: usize, seed: u64) -> Mat {
    let mut rng = SplitMix64::new(seed);
    let mut m = Mat::zeros(k, k);
    for i in 0..k {
        for j in 0..=i {
            let x = rng.uniform(-3.0, 3.0);
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    m
}

/// Coefficients of a polynomial with the given real roots (ascending
/// coefficient order, leading coefficient 1).
pub fn poly_from_roots(roots: &[f64]) -> Vec<f64> {
    let mut c = vec![1.0];
    for &r in roots {
        let mut next = vec![0.0; c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            next[i + 1] += ci;
            next[i] -= r * ci;
        }
        c = next;
    }
    c
}

/// The triaxial ellipsoid with its outward normal family.
pub fn ellipsoid_family() -> (CatalogSurface, LineFamily) {
    let s = catalog::surface("ellipsoid", &[1.0, 1.5, 2.0]).unwrap();
    let fam = LineFamily::new(s.chart.clone(), s.normal_field()).unwrap();
    (s, fam)
}
