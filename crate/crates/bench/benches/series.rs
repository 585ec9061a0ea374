use std::collections::BTreeMap;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mapgf::{compute_r, compute_rp, gf_boundaries, lagrange_coeff, BoundarySpec, TruncationSpec};

fn kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("kernel");
    for t in [6, 8, 10] {
        let trunc = TruncationSpec::with_default_vars(t, 3).unwrap();
        g.bench_with_input(BenchmarkId::new("R", t), &trunc, |b, &tr| b.iter(|| compute_r(tr).unwrap()));
        g.bench_with_input(BenchmarkId::new("R_3", t), &trunc, |b, &tr| b.iter(|| compute_rp(3, tr).unwrap()));
    }
    g.finish();
}

fn boundaries(c: &mut Criterion) {
    let trunc = TruncationSpec::with_default_vars(8, 3).unwrap();
    let mut g = c.benchmark_group("gf_boundaries");
    for ls in [vec![2, 2], vec![1, 3], vec![2, 2, 2], vec![1, 1, 2, 2]] {
        let spec = BoundarySpec::new(2, ls.clone()).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(format!("{ls:?}")), &spec, |b, s| {
            b.iter(|| gf_boundaries(s, trunc).unwrap())
        });
    }
    g.finish();
}

fn lagrange(c: &mut Criterion) {
    let profile: BTreeMap<u32, u32> = [(1, 2), (2, 1), (3, 1)].into_iter().collect();
    c.bench_function("lagrange_coeff p=2 n=8", |b| b.iter(|| lagrange_coeff(2, 1, 8, &profile)));
}

criterion_group!(benches, kernels, boundaries, lagrange);
criterion_main!(benches);
