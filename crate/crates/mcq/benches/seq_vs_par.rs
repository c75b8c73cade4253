use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mcq::codes::frobenius_closed_basis;
use mcq::instance::{CodeKind, KeyInstance, Params};
use mcq::pfaffian::{macaulay_hf, system_from_basis, HfOptions, PfaffianSystem};
use mcq::qrel::rank_census_blocks;
use mcq::{Exec, FieldCtx};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn pure_pfaffian(c: &mut Criterion) {
    let f = FieldCtx::new(2, 1, 4).unwrap();
    let sys = PfaffianSystem::pure(10);
    let mut g = c.benchmark_group("hf_pure_s10_d3");
    g.sample_size(10);
    for (name, exec) in MODES {
        let opts = HfOptions { exec, ..Default::default() };
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| macaulay_hf(&f, &sys, 3, &opts).unwrap()));
    }
    g.finish();
}

fn goppa_cell(c: &mut Criterion) {
    // q=4, m=4, r=4, n=76: one distinguisher cell at degree 2
    let params = Params { p: 2, a: 2, m: 4, r: 4, n: 76 };
    let f = params.field().unwrap();
    let (_, public) = KeyInstance::generate(params, CodeKind::Goppa, 1).unwrap();
    let hb = frobenius_closed_basis(&f, &public, 4, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    let sys = system_from_basis(&f, &hb).unwrap();
    let mut g = c.benchmark_group("hf_goppa_q4m4r4n76_d2");
    g.sample_size(10);
    for (name, exec) in MODES {
        let opts = HfOptions { exec, ..Default::default() };
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| macaulay_hf(&f, &sys, 2, &opts).unwrap()));
    }
    g.finish();
}

fn census(c: &mut Criterion) {
    let f = FieldCtx::new(2, 1, 3).unwrap();
    let mut g = c.benchmark_group("census_gf8_r5");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| rank_census_blocks(&f, 5, exec).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, pure_pfaffian, goppa_cell, census);
criterion_main!(benches);
