use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use randfact_bench::{decaying, psd_flat_tail, unstructured};
use randfact_core::dense::{cpqr, svd, CpqrStop};
use randfact_core::fullfact::{hqrrp, randutv};
use randfact_core::lowrank::{
    fast_randomized_id, nystrom_evd, randomized_id, rsvd, single_pass_evd, single_pass_svd, MatrixStream,
};

fn low_rank(c: &mut Criterion) {
    let mut group = c.benchmark_group("low_rank");
    let a = decaying(400, 300);
    for k in [10, 40] {
        group.bench_with_input(BenchmarkId::new("rsvd", k), &k, |b, &k| b.iter(|| rsvd(black_box(&a), k, 10, 0, 1)));
        group.bench_with_input(BenchmarkId::new("rsvd_q2", k), &k, |b, &k| b.iter(|| rsvd(black_box(&a), k, 10, 2, 1)));
        group.bench_with_input(BenchmarkId::new("single_pass_svd", k), &k, |b, &k| {
            b.iter(|| single_pass_svd(&mut MatrixStream::from_matrix(black_box(&a), 64), k, k, 1))
        });
    }
    let s = psd_flat_tail(300, 20);
    group.bench_function("nystrom_evd", |b| b.iter(|| nystrom_evd(black_box(&s), 20, 10, 1)));
    group.bench_function("single_pass_evd", |b| {
        b.iter(|| single_pass_evd(&mut MatrixStream::from_matrix(black_box(&s), 64), 20, 20, 1))
    });
    group.bench_function("dense_svd_baseline", |b| b.iter(|| svd(black_box(&a))));
    group.finish();
}

fn interpolative(c: &mut Criterion) {
    let mut group = c.benchmark_group("interpolative");
    let a = unstructured(64, 4096);
    for ell in [8, 16, 32, 64] {
        let k = ell / 2;
        group.bench_with_input(BenchmarkId::new("gaussian_id", ell), &k, |b, &k| {
            b.iter(|| randomized_id(black_box(&a), k, k, 0, 1))
        });
        group.bench_with_input(BenchmarkId::new("srft_id", ell), &k, |b, &k| {
            b.iter(|| fast_randomized_id(black_box(&a), k, k, 1))
        });
    }
    group.finish();
}

fn full(c: &mut Criterion) {
    let mut group = c.benchmark_group("full_factorization");
    group.sample_size(10);
    for n in [128, 256] {
        let a = decaying(n, n);
        group.bench_with_input(BenchmarkId::new("cpqr", n), &a, |b, a| b.iter(|| cpqr(black_box(a), CpqrStop::Full)));
        group.bench_with_input(BenchmarkId::new("hqrrp", n), &a, |b, a| b.iter(|| hqrrp(black_box(a), 32, 10, 1)));
        group.bench_with_input(BenchmarkId::new("randutv", n), &a, |b, a| b.iter(|| randutv(black_box(a), 32, 2, 1)));
    }
    group.finish();
}

criterion_group!(benches, low_rank, interpolative, full);
criterion_main!(benches);
