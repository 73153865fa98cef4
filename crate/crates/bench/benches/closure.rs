use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use locnilp::classify::{classify, ClassifyOptions};
use locnilp::construct::{make_g_alpha_b, make_h_alpha};
use locnilp::oracle::{maximality_check, MaximalityMode};
use locnilp::Field;

fn closure(c: &mut Criterion) {
    let f7 = Field::prime(7).unwrap();
    c.bench_function("closure H_1 GL(3,7)", |b| {
        b.iter(|| {
            let g = make_h_alpha(&f7, 3, &f7.one()).unwrap();
            black_box(g.closure().unwrap().len())
        })
    });
    let b_coeffs = [f7.one(), f7.zero()];
    c.bench_function("nilpotency class G(-1,1) GF(7)", |b| {
        b.iter(|| {
            let g = make_g_alpha_b(&f7, 2, &f7.from_i64(-1), &b_coeffs).unwrap();
            black_box(g.nilpotency_class().unwrap())
        })
    });
}

fn maximality(c: &mut Criterion) {
    let f5 = Field::prime(5).unwrap();
    let h = make_h_alpha(&f5, 2, &f5.one()).unwrap();
    c.bench_function("exhaustive maximality H_1 GL(2,5)", |b| {
        b.iter(|| {
            black_box(
                maximality_check(&h, MaximalityMode::Exhaustive)
                    .unwrap()
                    .maximal,
            )
        })
    });
}

fn classification(c: &mut Criterion) {
    let opts = ClassifyOptions {
        limit: 10,
        maximality: false,
        ..ClassifyOptions::default()
    };
    let f11 = Field::prime(11).unwrap();
    c.bench_function("classify q=2 GF(11)", |b| {
        b.iter(|| black_box(classify(2, &f11, &opts).unwrap()))
    });
    let q = Field::rationals();
    c.bench_function("classify q=2 Q limit 10", |b| {
        b.iter(|| black_box(classify(2, &q, &opts).unwrap()))
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = closure, maximality, classification
}
criterion_main!(benches);
