use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use interlock_bench::{design_space, synthetic_log};
use interlock_core::report::{analyze, AnalysisOptions};
use interlock_core::{
    derive_series, grid_search, max_crescent_force, CriticalDepthModel, DesignConstraints,
    ForceLaw, PulleyRig, SoilProperties,
};

fn crescent(c: &mut Criterion) {
    let dry = SoilProperties::dry_sand();
    c.bench_function("max_crescent_force/dry", |b| {
        b.iter(|| max_crescent_force(black_box(0.3), black_box(0.021), &dry, ForceLaw::Active))
    });
}

fn grid(c: &mut Criterion) {
    let soil = SoilProperties::dry_sand();
    let constraints = DesignConstraints::default();
    let cd = CriticalDepthModel::default();
    let mut group = c.benchmark_group("grid_search");
    group.sample_size(10);
    for n in [3, 6] {
        let space = design_space(n);
        group.bench_with_input(BenchmarkId::from_parameter(space.size()), &space, |b, s| {
            b.iter(|| grid_search(s, &soil, &constraints, &cd))
        });
    }
    group.finish();
}

fn trial(c: &mut Criterion) {
    let rig = PulleyRig::default();
    let mut group = c.benchmark_group("trial");
    for n in [20, 1000] {
        let log = synthetic_log(n);
        let design = log.metadata.design().unwrap();
        group.bench_with_input(BenchmarkId::new("derive_series", n), &log, |b, l| {
            b.iter(|| derive_series(l, &design, &rig))
        });
        group.bench_with_input(BenchmarkId::new("analyze", n), &log, |b, l| {
            b.iter(|| analyze(l, &AnalysisOptions::default()))
        });
    }
    group.finish();
}

criterion_group!(benches, crescent, grid, trial);
criterion_main!(benches);
