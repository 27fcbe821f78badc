use std::hint::black_box;

use buchidet::{postprocess, run, Limits, MergeStrategy};
use buchidet_bench::{config, corpus, families, CONFIGS};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn bench_families(c: &mut Criterion) {
    let mut group = c.benchmark_group("families");
    for (name, nba) in families() {
        for opts in ["def", "TEI", "TEIM"] {
            let cfg = config(opts, MergeStrategy::Safra);
            group.bench_with_input(BenchmarkId::new(opts, &name), &nba, |b, nba| {
                b.iter(|| run(black_box(nba), &cfg, &Limits::default()).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_configs(c: &mut Criterion) {
    let nbas = corpus();
    let mut group = c.benchmark_group("random-corpus");
    group.sample_size(10);
    for merge in MergeStrategy::ALL {
        for opts in CONFIGS {
            let cfg = config(opts, merge);
            group.bench_function(BenchmarkId::new(merge.to_string(), opts), |b| {
                b.iter(|| {
                    nbas.iter()
                        .map(|n| run(black_box(n), &cfg, &Limits::default()).unwrap().dpa.num_states())
                        .sum::<usize>()
                })
            });
        }
    }
    group.finish();
}

fn bench_postprocess(c: &mut Criterion) {
    let dpas: Vec<_> = corpus()
        .iter()
        .map(|n| run(n, &config("TEI", MergeStrategy::MullerSchupp), &Limits::default()).unwrap().dpa)
        .collect();
    c.bench_function("postprocess", |b| {
        b.iter(|| dpas.iter().map(|d| postprocess(black_box(d)).num_states()).sum::<usize>())
    });
}

criterion_group!(benches, bench_families, bench_configs, bench_postprocess);
criterion_main!(benches);
