//! Sequential against data-parallel execution on the same workloads.
//! With `--no-default-features` both rows run sequentially.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use klein_core::catalog::Catalog;
use klein_core::exec::Execution;
use klein_core::galois::{verdict_grid, Case};
use klein_core::lattice::minus_one_classes;
use klein_core::oracle::{audit_case, NumericConfig};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn lattice(c: &mut Criterion) {
    let mut g = c.benchmark_group("minus_one_classes(8)");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| minus_one_classes(8, exec).unwrap()));
    }
    g.finish();
}

fn grid(c: &mut Criterion) {
    let cat = Catalog::paper();
    let cases = [Case::An(3), Case::Dn(5), Case::Dn(9), Case::E6];
    let ms: Vec<u32> = (1..=30).collect();
    let mut g = c.benchmark_group("verdict_grid");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| verdict_grid(&cat, &cases, &ms, exec).unwrap()));
    }
    g.finish();
}

fn audit(c: &mut Criterion) {
    let cat = Catalog::paper();
    let cfgs = [NumericConfig::at(2)];
    let mut g = c.benchmark_group("audit_s6");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| audit_case(&cat, Case::E6, &cfgs, exec).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, lattice, grid, audit);
criterion_main!(benches);
