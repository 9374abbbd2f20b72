use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use ricci_mesh::curvature::full_report;
use ricci_mesh::flow::euler_step;
use ricci_mesh::manifolds::{build_gowdy, build_nil, build_torus4, geodesic_lengths};
use ricci_mesh::BlockKind;

fn curvature(c: &mut Criterion) {
    let torus = build_torus4(BlockKind::Cubic, [6, 8]).unwrap();
    c.bench_function("curvature report, torus4 cubic 6x8", |b| {
        b.iter(|| full_report(black_box(&torus.complex), black_box(&torus.initial)).unwrap())
    });
    let gowdy = build_gowdy(BlockKind::Diamond, 12).unwrap();
    c.bench_function("curvature report, gowdy diamond 12", |b| {
        b.iter(|| full_report(black_box(&gowdy.complex), black_box(&gowdy.initial)).unwrap())
    });
}

fn flow_step(c: &mut Criterion) {
    let gowdy = build_gowdy(BlockKind::Cubic, 24).unwrap();
    c.bench_function("euler step with flattening, gowdy cubic 24", |b| {
        b.iter(|| euler_step(&gowdy.complex, black_box(&gowdy.initial), 0.02, false, true).unwrap())
    });
}

fn geodesics(c: &mut Criterion) {
    let nil = build_nil(3, 1.0).unwrap();
    let mut group = c.benchmark_group("geodesic init");
    group.sample_size(10);
    group.bench_function("nil 3-block", |b| b.iter(|| geodesic_lengths(&nil.complex, black_box(&nil.metric))));
    group.finish();
}

criterion_group!(benches, curvature, flow_step, geodesics);
criterion_main!(benches);
