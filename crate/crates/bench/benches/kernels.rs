use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use commfib_bench::{algebra, presentation};
use commfib_core::{analyze, classify_elements, rank_profile, LazardGroup, DEFAULT_BUDGET, DEFAULT_PAIR_BUDGET};

fn rank_profiles(c: &mut Criterion) {
    let mut group = c.benchmark_group("rank_profile");
    for (name, p, k) in [("quadric8", 5, 1), ("quadric8", 3, 2), ("elliptic9", 7, 1), ("elliptic9", 11, 1)] {
        let pres = presentation(name, p, k);
        let id = format!("{name}/F_{}", pres.field().q());
        group.bench_function(BenchmarkId::from_parameter(id), |b| {
            b.iter(|| rank_profile(black_box(&pres), DEFAULT_BUDGET).unwrap())
        });
    }
    group.finish();
}

fn classification(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify");
    for (name, p, k) in [("quadric7", 7, 1), ("quadric8", 5, 1), ("elliptic9", 7, 1)] {
        let pres = presentation(name, p, k);
        let id = format!("{name}/F_{}", pres.field().q());
        group.bench_function(BenchmarkId::from_parameter(&id), |b| {
            b.iter(|| classify_elements(black_box(&pres), DEFAULT_BUDGET).unwrap())
        });
        group.bench_function(BenchmarkId::new("analyze_t1-3", &id), |b| {
            b.iter(|| analyze(black_box(&pres), &[1, 2, 3], DEFAULT_BUDGET).unwrap())
        });
    }
    group.finish();
}

fn brute_force(c: &mut Criterion) {
    let mut group = c.benchmark_group("brute_fibres");
    group.sample_size(10);
    for (name, p, k) in [("heisenberg", 3, 2), ("quadric7", 3, 1)] {
        let g = LazardGroup::new(&algebra(name, p, k)).unwrap();
        let id = format!("{name}/F_{}", g.field().q());
        group.bench_function(BenchmarkId::new("t2", &id), |b| {
            b.iter(|| g.brute_fibres(2, DEFAULT_PAIR_BUDGET).unwrap())
        });
        group.bench_function(BenchmarkId::new("conjugacy", &id), |b| {
            b.iter(|| g.conjugacy_count(DEFAULT_PAIR_BUDGET).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, rank_profiles, classification, brute_force);
criterion_main!(benches);
