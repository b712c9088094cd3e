use criterion::{black_box, criterion_group, criterion_main, Criterion};

use congruence_bench::{ellipsoid_family, poly_from_roots, random_symmetric};
use congruence_core::curvature;
use congruence_core::focal;
use congruence_core::grid::{Grid, GridAxis};
use congruence_core::numerics::{real_roots, sym_eigen};

fn bench_sym_eigen(c: &mut Criterion) {
    let m3 = random_symmetric(3, 1);
    let m6 = random_symmetric(6, 2);
    c.bench_function("sym_eigen_3x3", |b| {
        b.iter(|| sym_eigen(black_box(&m3)).unwrap())
    });
    c.bench_function("sym_eigen_6x6", |b| {
        b.iter(|| sym_eigen(black_box(&m6)).unwrap())
    });
}

fn bench_real_roots(c: &mut Criterion) {
    let simple = poly_from_roots(&[-2.5, -1.0, 0.3, 1.7, 2.9]);
    let multiple = poly_from_roots(&[-1.5, -1.5, 0.8, 0.8, 2.2]);
    c.bench_function("real_roots_deg5_simple", |b| {
        b.iter(|| real_roots(black_box(&simple)).unwrap())
    });
    c.bench_function("real_roots_deg5_doubles", |b| {
        b.iter(|| real_roots(black_box(&multiple)).unwrap())
    });
}

fn bench_focal(c: &mut Criterion) {
    let (s, fam) = ellipsoid_family();
    let nu = s.normal_field();
    let u = [0.9, 0.7];
    c.bench_function("shape_spectrum_ellipsoid", |b| {
        b.iter(|| focal::shape_spectrum(black_box(&s.chart), &nu, black_box(&u), None).unwrap())
    });
    c.bench_function("focal_points_ellipsoid", |b| {
        b.iter(|| focal::focal_points_generic(black_box(&fam), black_box(&u)).unwrap())
    });
}

fn bench_families(c: &mut Criterion) {
    let (_, fam) = ellipsoid_family();
    let u = [0.9, 0.7];
    c.bench_function("pullback_omega_ellipsoid", |b| {
        b.iter(|| fam.pullback_omega(black_box(&u)).unwrap())
    });
}

fn bench_curvature_verifier(c: &mut Criterion) {
    let (s, _) = ellipsoid_family();
    let nu = s.normal_field();
    let grid = Grid::new(vec![GridAxis::new(0.6, 1.0, 6), GridAxis::new(0.5, 0.9, 6)]);
    c.bench_function("verify_sectional_law_6x6", |b| {
        b.iter(|| curvature::verify_sectional_law(black_box(&s.chart), &nu, 0, 1, &grid).unwrap())
    });
}

criterion_group!(
    benches,
    bench_sym_eigen,
    bench_real_roots,
    bench_focal,
    bench_families,
    bench_curvature_verifier
);
criterion_main!(benches);
