//! Parallel against sequential execution of the same workloads.
//!
//! The `single_thread` variant runs inside a one-thread rayon pool, which is
//! what the sequential fallback amounts to. Building with
//! `--no-default-features` removes rayon from the library entirely; then both
//! variants run the plain iterator path.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use syzlab_core::boij_soderberg::{sample_profiles, CoeffDistribution, DEFAULT_GRID};
use syzlab_core::koszul::betti_table;
use syzlab_core::{FieldChoice, RingContext};

fn single_thread<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(f)
}

fn tables(c: &mut Criterion) {
    let mut g = c.benchmark_group("betti_table");
    g.sample_size(10);
    for (n, b, d) in [(2usize, 0i64, 3u32), (2, 0, 4), (3, 0, 2)] {
        let ctx = RingContext::new(n, b, d).unwrap();
        let label = format!("{n},{b},{d}");
        let run = move || betti_table(black_box(ctx), FieldChoice::default_prime()).unwrap();
        g.bench_with_input(BenchmarkId::new("parallel", &label), &ctx, |bch, _| bch.iter(run));
        g.bench_with_input(BenchmarkId::new("single_thread", &label), &ctx, |bch, _| {
            bch.iter(|| single_thread(run))
        });
    }
    g.finish();
}

fn profiles(c: &mut Criterion) {
    let mut g = c.benchmark_group("sample_profiles");
    g.sample_size(10);
    let run = || sample_profiles(black_box(400), 500, 1, CoeffDistribution::Uniform, &DEFAULT_GRID).unwrap();
    g.bench_function("parallel", |b| b.iter(run));
    g.bench_function("single_thread", |b| b.iter(|| single_thread(run)));
    g.finish();
}

criterion_group!(benches, tables, profiles);
criterion_main!(benches);
