use bdspace::canonical::{bd_expansion, lone_orbital};
use bdspace::{
    invariants, max_overlap_cid, max_overlap_cis, max_overlap_lowrank, max_overlap_slater, max_overlap_type4a,
    natural_spectrum, unembed, TypeTag,
};
use bdspace_bench::{generic, of_class};
use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};

fn spectral(c: &mut Criterion) {
    let states = generic(16);
    let mut g = c.benchmark_group("spectral");
    g.bench_function("natural_spectrum", |b| {
        b.iter(|| states.iter().map(|t| natural_spectrum(black_box(t)).lambdas[0]).sum::<f64>())
    });
    g.bench_function("bd_expansion", |b| b.iter(|| states.iter().map(|t| bd_expansion(black_box(t))).count()));
    g.bench_function("lone_orbital", |b| b.iter(|| states.iter().map(|t| lone_orbital(black_box(t))).count()));
    g.finish();
}

fn classify(c: &mut Criterion) {
    let mut states = generic(4);
    states.extend(of_class(TypeTag::CIS, 4));
    states.extend(of_class(TypeTag::Type3b, 4));
    c.bench_function("invariants", |b| b.iter(|| states.iter().map(|t| invariants(black_box(t)).rank).sum::<usize>()));
}

fn overlap(c: &mut Criterion) {
    let states = generic(4);
    let mut g = c.benchmark_group("max_overlap");
    g.sample_size(10);
    g.bench_function("lowrank", |b| b.iter(|| states.iter().map(|t| max_overlap_lowrank(t).overlap).sum::<f64>()));
    for restarts in [1, 8] {
        g.bench_function(format!("slater/{restarts}"), |b| {
            b.iter(|| states.iter().map(|t| max_overlap_slater(t, restarts, 0).overlap).sum::<f64>())
        });
        g.bench_function(format!("cis/{restarts}"), |b| {
            b.iter(|| states.iter().map(|t| max_overlap_cis(t, restarts, 0).overlap).sum::<f64>())
        });
        g.bench_function(format!("cid/{restarts}"), |b| {
            b.iter(|| states.iter().map(|t| max_overlap_cid(t, restarts, 0).overlap).sum::<f64>())
        });
    }
    g.bench_function("type4a/8", |b| {
        b.iter_batched(
            || states.iter().map(|t| unembed(t, &bd_expansion(t).paired).unwrap()).collect::<Vec<_>>(),
            |qs| qs.iter().map(|q| max_overlap_type4a(q, 8, 0).overlap).sum::<f64>(),
            BatchSize::SmallInput,
        )
    });
    g.finish();
}

criterion_group!(benches, spectral, classify, overlap);
criterion_main!(benches);
