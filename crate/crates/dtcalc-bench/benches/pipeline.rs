use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use dtcalc_bench::a2_path;
use dtcalc_core::dtinv::dt_numerical;
use dtcalc_core::epsilon::{epsilon_k, indicator};
use dtcalc_core::stackmodel::special_cones;
use dtcalc_core::Subspace;

fn bench_special_cones(c: &mut Criterion) {
    let (x, _) = a2_path();
    let zero = Subspace::zero(x.ambient_rank());
    c.bench_function("special_cones/a2_path", |b| {
        b.iter(|| special_cones(black_box(&x), &zero).unwrap())
    });
}

fn bench_epsilon(c: &mut Criterion) {
    let (x, mu) = a2_path();
    let ind = indicator(&x);
    c.bench_function("epsilon_k/a2_path_k1", |b| {
        b.iter(|| epsilon_k(black_box(&x), &mu, &ind, 1).unwrap())
    });
}

fn bench_dt(c: &mut Criterion) {
    let (x, mu) = a2_path();
    c.bench_function("dt_numerical/a2_path_k1", |b| {
        b.iter(|| dt_numerical(black_box(&x), &mu, 1).unwrap())
    });
}

criterion_group!(benches, bench_special_cones, bench_epsilon, bench_dt);
criterion_main!(benches);
