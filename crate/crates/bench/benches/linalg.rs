use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fpc_core::{code_from_complex, CarpetSpec, Fpc};

fn spec(l: u32) -> CarpetSpec {
    CarpetSpec::new(3, 1, l).unwrap()
}

fn rank(c: &mut Criterion) {
    let mut group = c.benchmark_group("rank");
    group.sample_size(10);
    for l in [1, 2] {
        let f = Fpc::build(&spec(l)).unwrap();
        let code = code_from_complex(&f.middle(), "bench").unwrap();
        group.bench_with_input(BenchmarkId::new("hx", l), &code.hx, |b, m| b.iter(|| black_box(m.rank())));
        group.bench_with_input(BenchmarkId::new("logicals", l), &code, |b, code| {
            b.iter(|| black_box(code.num_logical_qubits()))
        });
    }
    group.finish();
}

fn product(c: &mut Criterion) {
    let mut group = c.benchmark_group("product");
    group.sample_size(10);
    for l in [1, 2] {
        group.bench_with_input(BenchmarkId::new("fpc", l), &spec(l), |b, s| {
            b.iter(|| black_box(Fpc::build(s).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, rank, product);
criterion_main!(benches);
