//! State-space generation and minimization benchmarks over the bundled
//! client/server family: the full composition against the first-reduce
//! then-compose construction, plus branching-bisimulation minimization.
//!
//! Run with and without the `parallel` feature to compare the rayon frontier
//! expansion against the sequential fallback, e.g.
//!
//! ```text
//! cargo bench -p paradigm -- --save-baseline parallel
//! cargo bench -p paradigm --no-default-features -- --baseline parallel
//! ```

use std::collections::BTreeMap;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use paradigm::bisim::branching_quotient;
use paradigm::generate::{client_server, Variant};
use paradigm::lts::{hide, LabelKind, LabelSet};
use paradigm::reduce::reduced_system;
use paradigm::translate::translate_system;

fn generation(c: &mut Criterion) {
    let mut group = c.benchmark_group("generate");
    group.sample_size(20);
    for n in [2usize, 3, 4, 5] {
        let model = client_server(Variant::Basic, n);
        group.bench_with_input(BenchmarkId::new("full", n), &model, |b, model| {
            b.iter(|| translate_system(model).unwrap());
        });
        group.bench_with_input(BenchmarkId::new("reduced", n), &model, |b, model| {
            b.iter(|| reduced_system(model, &BTreeMap::new(), true).unwrap());
        });
    }
    // The reduced construction stays tractable well past the full one.
    let model = client_server(Variant::Basic, 8);
    group.bench_with_input(BenchmarkId::new("reduced", 8), &model, |b, model| {
        b.iter(|| reduced_system(model, &BTreeMap::new(), true).unwrap());
    });
    group.finish();
}

fn minimization(c: &mut Criterion) {
    let mut group = c.benchmark_group("minimize");
    group.sample_size(20);
    for n in [3usize, 4] {
        let system = translate_system(&client_server(Variant::Basic, n)).unwrap();
        let hidden = hide(&system, &LabelSet::kinds([LabelKind::Ok]));
        group.bench_with_input(BenchmarkId::new("system", n), &hidden, |b, lts| {
            b.iter(|| branching_quotient(lts));
        });
    }
    group.finish();
}

criterion_group!(benches, generation, minimization);
criterion_main!(benches);
