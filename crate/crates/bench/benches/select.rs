use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion, Throughput};
use frselect::{select, RngStream};
use frselect_bench::{permutation, variant_params, VARIANTS};

fn median(c: &mut Criterion) {
    let mut group = c.benchmark_group("median");
    group.sample_size(20);
    for n in [100_000usize, 1_000_000] {
        let input = permutation(n, 1);
        group.throughput(Throughput::Elements(n as u64));
        for (name, variant) in VARIANTS {
            let params = variant_params(variant);
            group.bench_with_input(BenchmarkId::new(name, n), &input, |b, input| {
                let mut seed = 0;
                b.iter_batched_ref(
                    || input.clone(),
                    |data| {
                        seed += 1;
                        select(data, n.div_ceil(2), &params, &mut RngStream::from_seed(seed)).unwrap()
                    },
                    BatchSize::LargeInput,
                );
            });
        }
    }
    group.finish();
}

fn std_baseline(c: &mut Criterion) {
    let n = 1_000_000;
    let input = permutation(n, 1);
    c.bench_function("std select_nth_unstable 1000000", |b| {
        b.iter_batched_ref(
            || input.clone(),
            |data| *data.select_nth_unstable(n / 2).1,
            BatchSize::LargeInput,
        );
    });
}

criterion_group!(benches, median, std_baseline);
criterion_main!(benches);
