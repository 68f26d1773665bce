use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use summand_core::aks::aks_report_in;
use summand_core::analysis::Analysis;
use summand_core::builtin;
use summand_core::endo::{endomorphism_ring, enumerate_idempotents};
use summand_core::{Config, Exec};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn idempotents(c: &mut Criterion) {
    let a = builtin::algebra("abelian_group:p=2,orders=2x2").unwrap();
    let m = builtin::module(&a, "free:rank=2", &Config::default()).unwrap();
    let e = endomorphism_ring(&m).unwrap();
    let mut g = c.benchmark_group("idempotents_2^16");
    for (name, exec) in MODES {
        let cfg = Config::default().with_exec(exec);
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| enumerate_idempotents(black_box(&e), &cfg).unwrap().len())
        });
    }
    g.finish();
}

fn analysis_and_aks(c: &mut Criterion) {
    let a = builtin::algebra("product_fields:p=2,k=3").unwrap();
    let m = builtin::module(&a, "regular+regular", &Config::default()).unwrap();
    let mut g = c.benchmark_group("aks_F2^3_regular^2");
    g.sample_size(20);
    for (name, exec) in MODES {
        let cfg = Config::default().with_exec(exec);
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let an = Analysis::new(black_box(&m), &cfg).unwrap();
                aks_report_in(&an).unwrap().aks1
            })
        });
    }
    g.finish();
}

fn corpus(c: &mut Criterion) {
    let mut g = c.benchmark_group("corpus_check");
    g.sample_size(10);
    for (name, exec) in MODES {
        let cfg = Config::default().with_exec(exec);
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                summand_core::corpus::corpus_check(&cfg)
                    .unwrap()
                    .checks_passed
            })
        });
    }
    g.finish();
}

criterion_group!(benches, idempotents, analysis_and_aks, corpus);
criterion_main!(benches);
