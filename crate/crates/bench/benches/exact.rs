use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use ellsurf::arrangement::generate_arrangement;
use ellsurf::dihedral::cover_sweep;
use ellsurf::exactalg::{rat, smith_normal_form};
use ellsurf::kodaira::fiber_data;
use ellsurf::mwgroup::abel_jacobi_image;
use ellsurf::scenario::{bundled_table, ArrangementType, E_PLUS, GENERATOR};
use ellsurf::FiberKind;

fn fibers(c: &mut Criterion) {
    c.bench_function("fiber_data II*", |b| {
        b.iter(|| fiber_data(black_box(FiberKind::IIStar)).unwrap())
    });
    c.bench_function("fiber_data I*12", |b| {
        b.iter(|| fiber_data(black_box(FiberKind::IStar(12))).unwrap())
    });
    let a = fiber_data(FiberKind::IStar(12)).unwrap().a;
    c.bench_function("inverse I*12", |b| {
        b.iter(|| black_box(&a).inverse().unwrap())
    });
    let g = a.neg().to_int().unwrap();
    c.bench_function("smith I*12", |b| {
        b.iter(|| smith_normal_form(black_box(&g)))
    });
}

fn pipeline(c: &mut Criterion) {
    let t = bundled_table(ArrangementType::TypeII).unwrap();
    c.bench_function("image E+", |b| {
        b.iter(|| abel_jacobi_image(black_box(&t), E_PLUS, GENERATOR).unwrap())
    });
    c.bench_function("cover sweep 3..50", |b| {
        b.iter(|| cover_sweep(black_box(&t), ArrangementType::TypeII, 3, 50).unwrap())
    });
    c.bench_function("generate arrangement", |b| {
        b.iter(|| generate_arrangement(black_box(&rat(2)), black_box(&rat(3)), -1).unwrap())
    });
}

criterion_group!(benches, fibers, pipeline);
criterion_main!(benches);
