use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qcorr_bench::ar1_pair;
use qcorr_core::{
    compressed_corr, consecutive_corr, plain_corr, quantized_compressed, sample_scheme, subsample_without_replacement,
    subsampled_corr, var_CN_finite, var_cN_finite, Ar1Model, SchemeKind,
};
use std::hint::black_box;

const N: usize = 1000;
const M: usize = 100;

fn estimators(c: &mut Criterion) {
    let p = ar1_pair(N, 1);
    let s = sample_scheme(SchemeKind::DenseGaussian, N, M, 2).unwrap();
    let idx = subsample_without_replacement(N, M, 3).unwrap();
    let mut g = c.benchmark_group("estimators");
    g.bench_function("plain", |b| b.iter(|| plain_corr(black_box(&p))));
    g.bench_function("consecutive", |b| b.iter(|| consecutive_corr(black_box(&p), M).unwrap()));
    g.bench_function("compressed-gaussian", |b| b.iter(|| compressed_corr(black_box(&p), &s).unwrap()));
    g.bench_function("quantized-compressed", |b| b.iter(|| quantized_compressed(black_box(&p), &s).unwrap()));
    g.bench_function("subsampled", |b| b.iter(|| subsampled_corr(black_box(&p), &idx).unwrap()));
    g.finish();
}

fn schemes(c: &mut Criterion) {
    let x = ar1_pair(N, 4).x().to_vec();
    let mut g = c.benchmark_group("schemes");
    for kind in SchemeKind::ALL {
        g.bench_with_input(BenchmarkId::new("sample", kind), &kind, |b, &k| {
            b.iter(|| sample_scheme(k, N, M, black_box(5)).unwrap())
        });
        let s = sample_scheme(kind, N, M, 6).unwrap();
        g.bench_with_input(BenchmarkId::new("apply", kind), &s, |b, s| b.iter(|| s.apply(black_box(&x)).unwrap()));
    }
    g.finish();
}

fn theory(c: &mut Criterion) {
    let model = Ar1Model::new(0.7).unwrap();
    let mut g = c.benchmark_group("theory");
    g.bench_function("var_cN_finite", |b| b.iter(|| var_cN_finite(&model, black_box(N), 3).unwrap()));
    g.bench_function("var_CN_finite", |b| b.iter(|| var_CN_finite(&model, black_box(N), M, 0.0, 3).unwrap()));
    g.finish();
}

criterion_group!(benches, estimators, schemes, theory);
criterion_main!(benches);
