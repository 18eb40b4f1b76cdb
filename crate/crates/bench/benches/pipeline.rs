use criterion::{black_box, criterion_group, criterion_main, Criterion};

use gitfankit_bench as w;

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumeration");
    for n in [4usize, 5] {
        g.bench_function(format!("ysets/{n}"), |b| b.iter(|| w::ysets(black_box(n))));
    }
    g.finish();
}

fn fans(c: &mut Criterion) {
    let mut g = c.benchmark_group("fans");
    g.sample_size(10);
    for n in [3usize, 4, 5] {
        g.bench_function(format!("git_fan/{n}"), |b| b.iter(|| w::git_fan(black_box(n))));
    }
    g.bench_function("sigma_r/4", |b| b.iter(|| w::sigma_r(black_box(4))));
    g.bench_function("delta/4", |b| b.iter(|| w::delta(black_box(4))));
    g.finish();
}

fn semilattices(c: &mut Criterion) {
    let mut g = c.benchmark_group("semilattices");
    g.sample_size(10);
    g.bench_function("fk_bridge/50", |b| b.iter(|| w::fk_bridge(black_box(50))));
    g.bench_function("criterion_sweep/3", |b| b.iter(|| w::criterion_on_orthant(black_box(3))));
    g.finish();
}

criterion_group!(benches, enumeration, fans, semilattices);
criterion_main!(benches);
