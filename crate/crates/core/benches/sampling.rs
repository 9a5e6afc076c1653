use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pullback_lab::lab::{pullback_attractor_sample, HorizonSchedule, PullbackConfig, SeedFamily};
use pullback_lab::solver::attainability_set;
use pullback_lab::{CoefficientProfile, Execution, GridFunction, GridSpec, Schedule, SelectionPolicy};

fn profile() -> CoefficientProfile {
    CoefficientProfile::with_tight_bounds(
        Schedule::exp_approach(1.0, 1.0, 1.0, 0.0),
        Schedule::exp_approach(0.0, 4.0, 0.5, 0.0),
        true,
    )
    .unwrap()
}

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn pullback(c: &mut Criterion) {
    let p = profile();
    let spec = GridSpec::new(63).unwrap();
    let cfg = PullbackConfig {
        dt: 1e-3,
        seeds: SeedFamily::random(16, 7),
        policies: SelectionPolicy::standard_family(7),
        horizon: HorizonSchedule::doubling(0.5, 6).unwrap(),
        tol: 1e-8,
    };
    let mut group = c.benchmark_group("pullback_sample");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| pullback_attractor_sample(2.0, &p, spec, &cfg, exec).unwrap())
        });
    }
    group.finish();
}

fn attainability(c: &mut Criterion) {
    let p = profile();
    let spec = GridSpec::new(127).unwrap();
    let x = GridFunction::from_fn(spec, |s| (7.0 * s).sin()).unwrap();
    let policies: Vec<SelectionPolicy> = (0..32).map(SelectionPolicy::random_switch).collect();
    let mut group = c.benchmark_group("attainability_set");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| attainability_set(&x, 0.0, 1.0, 1e-3, &p, &policies, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, pullback, attainability);
criterion_main!(benches);
