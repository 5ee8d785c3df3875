use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use logjac::oracles::closed_griffiths_dim;
use logjac_bench::{instance, window_dims, SHAPES};

fn quotient_window(c: &mut Criterion) {
    let mut group = c.benchmark_group("quotient_window");
    group.sample_size(10);
    for (n, d, e) in SHAPES {
        let inst = instance(n, d, e);
        // exact windows beyond the curve shapes take tens of seconds each
        if n == 2 {
            group.bench_with_input(BenchmarkId::new("Q", format!("{n}-{d}-{e}")), &inst, |b, inst| {
                b.iter(|| black_box(window_dims(inst)))
            });
        }
        let fp = inst.to_prime(1_000_003).expect("reduction");
        group.bench_with_input(BenchmarkId::new("Fp", format!("{n}-{d}-{e}")), &fp, |b, inst| {
            b.iter(|| black_box(window_dims(inst)))
        });
    }
    group.finish();
}

fn pairing(c: &mut Criterion) {
    let mut group = c.benchmark_group("pairing");
    group.sample_size(10);
    for (n, d, e) in SHAPES.into_iter().take(2) {
        let inst = instance(n, d, e);
        let (lo, _) = inst.duality_window();
        group.bench_function(format!("{n}-{d}-{e}"), |b| {
            b.iter(|| black_box(inst.clone().pairing_report(0, lo).expect("pairing")))
        });
    }
    group.finish();
}

fn closed_ring(c: &mut Criterion) {
    let mut group = c.benchmark_group("closed_ring");
    group.sample_size(10);
    group.bench_function("quintic-threefold-q1", |b| b.iter(|| black_box(closed_griffiths_dim(4, 5, 1).unwrap())));
    group.finish();
}

criterion_group!(benches, quotient_window, pairing, closed_ring);
criterion_main!(benches);
