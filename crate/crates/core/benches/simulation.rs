//! Replica-level throughput, with and without the thread pool.
//!
//! Build with the default features for the parallel path and with
//! `--no-default-features` for the plain sequential build; criterion
//! baselines make the two comparable across runs. With the pool enabled
//! the `threads_1` variants additionally show the same build confined to
//! one worker, so pool overhead and scaling are visible in a single run.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use stoclock::{
    nth_event_time_spread, simulate_decay_ensemble, simulate_poisson_stream, ClockParams,
    SimConfig, SimMode,
};

fn stream_config(replicas: u64) -> SimConfig {
    let params = ClockParams::new(1.0, 10_001).unwrap();
    SimConfig::new(params, SimMode::PoissonStream, replicas, 7, 20_000).unwrap()
}

fn ensemble_config() -> SimConfig {
    let params = ClockParams::new(1.0, 100_001).unwrap();
    SimConfig::new(params, SimMode::DepletingEnsemble, 1, 7, 1).unwrap()
}

fn bench_spread(c: &mut Criterion) {
    let config = stream_config(500);
    let mut group = c.benchmark_group("nth_event_spread_500x10001");
    group.sample_size(10);
    group.bench_function("default", |b| {
        b.iter(|| nth_event_time_spread(black_box(&config), black_box(10_001)).unwrap())
    });
    #[cfg(feature = "parallel")]
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        group.bench_function("threads_1", |b| {
            b.iter(|| {
                pool.install(|| nth_event_time_spread(black_box(&config), black_box(10_001)))
                    .unwrap()
            })
        });
    }
    group.finish();
}

fn bench_single_replica(c: &mut Criterion) {
    let mut group = c.benchmark_group("single_replica");
    group.sample_size(20);
    let ensemble = ensemble_config();
    group.bench_function("ensemble_m_100001", |b| {
        b.iter(|| simulate_decay_ensemble(black_box(&ensemble), black_box(0)).unwrap())
    });
    let stream = stream_config(1);
    group.bench_function("stream_20000_events", |b| {
        b.iter(|| simulate_poisson_stream(black_box(&stream), black_box(0), black_box(20_000)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_spread, bench_single_replica);
criterion_main!(benches);
