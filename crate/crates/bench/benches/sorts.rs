use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use learned_sort::radix::lsd_radix_sort;
use learned_sort::{learned_sort, SortConfig, SortKey};
use learned_sort_bench::bench_datasets;
use std::hint::black_box;

fn bench_sorters(c: &mut Criterion) {
    let n = 1_000_000;
    let config = SortConfig::default();
    let mut group = c.benchmark_group("sort_1m");
    group.throughput(Throughput::Elements(n as u64));
    group.sample_size(10);

    for (label, keys) in bench_datasets(n) {
        group.bench_with_input(BenchmarkId::new("learned_sort2", &label), &keys, |b, keys| {
            b.iter_batched(
                || keys.clone(),
                |mut data| {
                    learned_sort(black_box(&mut data), &config).unwrap();
                    data
                },
                criterion::BatchSize::LargeInput,
            )
        });
        group.bench_with_input(BenchmarkId::new("std_sort", &label), &keys, |b, keys| {
            b.iter_batched(
                || keys.clone(),
                |mut data| {
                    f64::sort_slice(black_box(&mut data));
                    data
                },
                criterion::BatchSize::LargeInput,
            )
        });
        group.bench_with_input(BenchmarkId::new("lsd_radix", &label), &keys, |b, keys| {
            b.iter_batched(
                || keys.clone(),
                |mut data| {
                    lsd_radix_sort(black_box(&mut data));
                    data
                },
                criterion::BatchSize::LargeInput,
            )
        });
    }
    group.finish();
}

criterion_group!(benches, bench_sorters);
criterion_main!(benches);
