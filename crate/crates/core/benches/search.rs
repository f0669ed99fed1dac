use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use entcost::random::random_params;
use entcost::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn detector_search(c: &mut Criterion) {
    let p = random_params(&mut ChaCha8Rng::seed_from_u64(1));
    let meas = build_basis(&p);
    let mut group = c.benchmark_group("maximize_delta");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(
            BenchmarkId::new("desk_detector", name),
            &exec,
            |b, &exec| {
                b.iter(|| {
                    maximize_delta_in(black_box(&meas), &GridSpec::desk_detector(), exec).unwrap()
                })
            },
        );
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let meas = GridSpec {
        mode: SearchMode::Random {
            n_samples: 8,
            seed: 2,
        },
        ..GridSpec::desk_measurement()
    };
    let det = GridSpec::desk_detector();
    let threads = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .max(2);
    let mut group = c.benchmark_group("sweep_records");
    group.sample_size(10);
    for (name, workers) in [("sequential", 1), ("parallel", threads)] {
        group.bench_with_input(BenchmarkId::new("8_points", name), &workers, |b, &w| {
            b.iter(|| sweep_records(&meas, &det, w).unwrap())
        });
    }
    group.finish();
}

fn probe_eval(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let probe = Probe::new(&build_basis(&random_params(&mut rng)));
    let det = random_params(&mut rng);
    c.bench_function("probe/evaluate_best_pairing", |b| {
        b.iter(|| probe.evaluate_best_pairing(black_box(&det)))
    });
}

criterion_group!(benches, probe_eval, detector_search, sweep);
criterion_main!(benches);
