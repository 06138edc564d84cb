use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use meshsim_bench::grid_scenario;
use meshsim_core::config::Algorithm;
use meshsim_core::experiments::builtin_scenario;
use meshsim_core::simnet::run;

fn shipped(c: &mut Criterion) {
    let mut group = c.benchmark_group("outdoor10_5min");
    group.sample_size(10);
    let base = builtin_scenario("outdoor10").unwrap();
    for algorithm in [Algorithm::Btmr, Algorithm::Mam] {
        let cfg = meshsim_core::config::ScenarioConfig {
            algorithm,
            duration_ms: 300_000,
            ..base.clone()
        };
        group.bench_function(algorithm.slug(), |b| {
            b.iter(|| black_box(run(&cfg).unwrap()))
        });
    }
    group.finish();
}

fn grids(c: &mut Criterion) {
    let mut group = c.benchmark_group("grid_60s");
    group.sample_size(10);
    for side in [4u16, 8] {
        for algorithm in [Algorithm::Btmr, Algorithm::Mam] {
            let cfg = meshsim_core::config::ScenarioConfig {
                algorithm,
                ..grid_scenario(side, 5.0, 60_000)
            };
            group.bench_with_input(BenchmarkId::new(algorithm.slug(), side), &cfg, |b, cfg| {
                b.iter(|| black_box(run(cfg).unwrap()))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, shipped, grids);
criterion_main!(benches);
