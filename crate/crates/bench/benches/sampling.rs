use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fpc_core::{
    brute_force_z, code_from_complex, sector_model, CarpetGraph, CarpetSpec, Fpc, IsingModel,
    LatticeGraph, Sampler, Sector, SpinConfig,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn carpet_model(l: u32, j: f64) -> IsingModel {
    let g = CarpetGraph::build(&CarpetSpec::new(3, 1, l).unwrap());
    IsingModel::from_graph(&LatticeGraph::from(&g), j).unwrap()
}

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    for l in [3, 4] {
        let m = carpet_model(l, 1.0);
        let sampler = Sampler::new(&m, 0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut s = SpinConfig::random(&m, &mut rng);
        group.bench_function(BenchmarkId::new("metropolis_carpet", l), |b| {
            b.iter(|| black_box(sampler.metropolis_sweep(&mut s, &mut rng)))
        });
        let mut s = SpinConfig::random(&m, &mut rng);
        group.bench_function(BenchmarkId::new("wolff_carpet", l), |b| {
            b.iter(|| black_box(sampler.wolff_sweep(&mut s, &mut rng).unwrap()))
        });
    }

    let f = Fpc::build(&CarpetSpec::new(3, 1, 1).unwrap()).unwrap();
    let code = code_from_complex(&f.middle(), "bench").unwrap();
    let m = sector_model(&code, Sector::Z, 1.0).unwrap();
    let sampler = Sampler::new(&m, 0.3);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut s = SpinConfig::random(&m, &mut rng);
    group.bench_function("metropolis_fpc_z_3_1_1", |b| {
        b.iter(|| black_box(sampler.metropolis_sweep(&mut s, &mut rng)))
    });
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let m = IsingModel::from_graph(&LatticeGraph::square(4, true), 0.4).unwrap();
    let mut group = c.benchmark_group("enumeration");
    group.sample_size(10);
    group.bench_function("z_torus_4x4", |b| b.iter(|| black_box(brute_force_z(&m, 1.0).unwrap())));
    group.finish();
}

criterion_group!(benches, sweeps, enumeration);
criterion_main!(benches);
