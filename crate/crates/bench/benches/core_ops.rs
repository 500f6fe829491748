//! Benchmarks for the operations that dominate verification runtime: entropy
//! of mid-sized states, selective monitorings, basis searches, and dilations.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qres::channels::{self, Destroyer, MonitoringStrength};
use qres::dilation::flow_ledger;
use qres::entropy::vn_entropy;
use qres::quantifiers::{discord_basis, discord_oneway, rbn_contextual, Context};
use qres::sampling::{self, rng_from_seed};
use qres::{Dims, SearchConfig, Subsystem};

fn bench_entropy(c: &mut Criterion) {
    let mut rng = rng_from_seed(1);
    let s = sampling::random_state(&mut rng, Dims { d_a: 4, d_b: 3 });
    c.bench_function("vn_entropy d=12", |b| b.iter(|| vn_entropy(black_box(&s))));
}

fn bench_monitoring(c: &mut Criterion) {
    let mut rng = rng_from_seed(2);
    let dims = Dims { d_a: 2, d_b: 3 };
    let s = sampling::random_state(&mut rng, dims);
    let basis = sampling::random_basis(&mut rng, Subsystem::A, dims.d_a);
    c.bench_function("phi_meas 2x3", |b| b.iter(|| channels::phi_meas(black_box(&s), &basis)));

    let destroyer = Destroyer::Basis(basis.clone());
    let eps = MonitoringStrength::new(0.5).unwrap();
    c.bench_function("monitoring eps=0.5 2x3", |b| {
        b.iter(|| channels::monitoring(black_box(&s), &destroyer, eps))
    });
}

fn bench_search(c: &mut Criterion) {
    let mut rng = rng_from_seed(3);
    let dims = Dims { d_a: 2, d_b: 2 };
    let s = sampling::random_state(&mut rng, dims);
    let basis = sampling::random_basis(&mut rng, Subsystem::A, dims.d_a);
    let ctx = Context::new(basis.clone(), sampling::random_basis(&mut rng, Subsystem::B, 2))
        .unwrap();
    let cfg = SearchConfig::default();

    c.bench_function("discord_basis eval 2x2", |b| {
        b.iter(|| discord_basis(black_box(&s), &basis))
    });
    c.bench_function("rbn_contextual eval 2x2", |b| {
        b.iter(|| rbn_contextual(black_box(&s), &ctx))
    });
    c.bench_function("discord_oneway search 2x2", |b| {
        b.iter(|| discord_oneway(black_box(&s), Subsystem::A, &cfg))
    });
}

fn bench_dilation(c: &mut Criterion) {
    let mut rng = rng_from_seed(4);
    let dims = Dims { d_a: 2, d_b: 2 };
    let s = sampling::random_state(&mut rng, dims);
    let eps = MonitoringStrength::new(0.75).unwrap();

    let selective = Destroyer::Basis(sampling::random_basis(&mut rng, Subsystem::A, dims.d_a));
    c.bench_function("flow_ledger selective 2x2", |b| {
        b.iter(|| flow_ledger(black_box(&s), &selective, eps))
    });
    c.bench_function("flow_ledger scrambling 2x2", |b| {
        b.iter(|| flow_ledger(black_box(&s), &Destroyer::Incompatible, eps))
    });
}

criterion_group!(benches, bench_entropy, bench_monitoring, bench_search, bench_dilation);
criterion_main!(benches);
