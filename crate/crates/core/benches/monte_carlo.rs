use std::hint::black_box;

use cawf_core::consumption::{cawf_montecarlo_with, CawfParams};
use cawf_core::stochastic::{simulate_gbm_reset_with, simulate_ou_reflected_with, GbmResetSpec, OuProcessSpec};
use cawf_core::{Execution, RngSpec};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn gbm_reset(c: &mut Criterion) {
    let spec = GbmResetSpec::new(0.25, 0.4, 0.3);
    let mut g = c.benchmark_group("gbm_reset_1e6");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| simulate_gbm_reset_with(&spec, RngSpec::new(1), black_box(1_000_000), exec).unwrap())
        });
    }
    g.finish();
}

fn ou_paths(c: &mut Criterion) {
    let spec = OuProcessSpec::new(0.5, 1.0, 0.3, 0.0, 1.0);
    let times = [spec.horizon];
    let mut g = c.benchmark_group("ou_reflected_256");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| simulate_ou_reflected_with(&spec, RngSpec::new(2), black_box(256), &times, exec).unwrap())
        });
    }
    g.finish();
}

fn cawf_mc(c: &mut Criterion) {
    let p = CawfParams::reference();
    let mut g = c.benchmark_group("cawf_montecarlo_1000");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| cawf_montecarlo_with(&p, RngSpec::new(3), black_box(1000), exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, gbm_reset, ou_paths, cawf_mc);
criterion_main!(benches);
