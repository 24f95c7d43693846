use std::hint::black_box;

use cantorloop::analysis::{coverage_certificate, greedy_partition, hausdorff, midpoint_voxel_cover, CurveSpec};
use cantorloop::curve::build_polyline;
use cantorloop::pattern::{pattern_closure, validate_tree, SearchOptions};
use cantorloop_bench::{circle_path, default_table};
use criterion::{criterion_group, criterion_main, Criterion};

fn pattern(c: &mut Criterion) {
    let table = default_table();
    c.bench_function("pattern_closure", |b| b.iter(|| pattern_closure(black_box(SearchOptions::default()))));
    c.bench_function("validate_tree_depth3", |b| b.iter(|| validate_tree(&table, black_box(3))));
    c.bench_function("build_polyline_depth4", |b| b.iter(|| build_polyline(&table, black_box(4))));
}

fn analysis(c: &mut Criterion) {
    let table = default_table();
    c.bench_function("coverage_depth6_grid9", |b| b.iter(|| coverage_certificate(&table, black_box(6), 9)));

    let p3 = build_polyline(&table, 3).unwrap().points_f64();
    let p4 = build_polyline(&table, 4).unwrap().points_f64();
    c.bench_function("hausdorff_polyline_3_4", |b| b.iter(|| hausdorff(black_box(&p3), black_box(&p4))));

    let path = circle_path(2000);
    c.bench_function("greedy_partition_circle_eps0.1", |b| b.iter(|| greedy_partition(&path, black_box(0.1))));

    let circle = CurveSpec::Circle.sample(2000).unwrap();
    c.bench_function("midpoint_voxels_circle_h0.01", |b| {
        b.iter(|| midpoint_voxel_cover(&circle.points, &circle.points, black_box(0.01)))
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = pattern, analysis
}
criterion_main!(benches);
