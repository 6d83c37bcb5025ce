use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use num_bigint::BigUint;

use chaosembed_core::{build_embedding, validate_covering, Address, CyclicOdometer, PathId, ScheduleMode, Tower};

fn deep_decode(c: &mut Criterion) {
    let t = Tower::new(Arc::new(CyclicOdometer::fixed_point()));
    t.schedule(1, 2, ScheduleMode::Strict).unwrap();
    let (lo, hi) = t.q_interval(254, 4).unwrap();
    let x: BigUint = (&lo + &hi) >> 1;
    let a = Address::on_path(254, PathId::First, x);
    c.bench_function("decode 254 -> 4", |b| b.iter(|| t.decode(black_box(&a), 4).unwrap()));
    c.bench_function("decode 254 -> 0", |b| b.iter(|| t.decode(black_box(&a), 0).unwrap()));
}

fn explicit_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("build");
    for (name, p) in [("fixed-point", CyclicOdometer::fixed_point()), ("odometer", CyclicOdometer::binary())] {
        let p = Arc::new(p);
        g.bench_function(format!("{name} to level 5"), |b| b.iter(|| build_embedding(p.clone(), 5, 1, 1).unwrap()));
    }
    g.finish();
}

fn covering_walk(c: &mut Criterion) {
    let seq = CyclicOdometer::binary().materialize(10).unwrap();
    let g = seq.level(10).unwrap();
    c.bench_function("edge covering walk, 1024-cycle", |b| b.iter(|| g.edge_covering_walk(0, 0).unwrap().len()));
    c.bench_function("validate odometer to level 10", |b| b.iter(|| validate_covering(black_box(&seq))));
}

criterion_group!(benches, deep_decode, explicit_build, covering_walk);
criterion_main!(benches);
