use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mapgf::oracle::{full_scan, hypermap_census, rooted_pointed_maps, MobileGenerator};
use mapgf::{bdg_forward_rooted, NodeKind};

fn maps(c: &mut Criterion) {
    let mut g = c.benchmark_group("census");
    g.sample_size(10);
    for darts in [4, 6, 8] {
        g.bench_with_input(BenchmarkId::new("full_scan", darts), &darts, |b, &n| b.iter(|| full_scan(n)));
    }
    g.bench_function("hypermaps p=3 [3,3]", |b| b.iter(|| hypermap_census(3, &[3, 3])));
    g.finish();
}

fn mobiles(c: &mut Criterion) {
    let mut g = c.benchmark_group("mobiles");
    g.sample_size(10);
    g.bench_function("generate p=2 whites<=5 blacks<=3", |b| {
        b.iter(|| MobileGenerator::new(2, 12, false).all_rooted(NodeKind::White, 5, 3, 0).len())
    });
    let pointed = rooted_pointed_maps(3);
    g.bench_function("bdg on pointed maps with 3 edges", |b| {
        b.iter(|| pointed.iter().map(|(m, v)| bdg_forward_rooted(m, *v, 0).unwrap().whites()).sum::<usize>())
    });
    g.finish();
}

criterion_group!(benches, maps, mobiles);
criterion_main!(benches);
