use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use heightcount::invariants::{dirichlet_l, exponent_check, riemann_zeta};
use heightcount::nfq::{class_number, regulator, Field};

fn constants(c: &mut Criterion) {
    c.bench_function("riemann_zeta(3) tol 1e-30", |b| b.iter(|| riemann_zeta(black_box(3), 1e-30)));
    c.bench_function("dirichlet_l(-23, 2) tol 1e-12", |b| {
        b.iter(|| dirichlet_l(black_box(-23), 2, 1e-12).unwrap())
    });
    let k = Field::quadratic(94).unwrap();
    c.bench_function("class number and regulator of Q(sqrt 94)", |b| {
        b.iter(|| (class_number(black_box(&k)), regulator(&k, 128)))
    });
    c.bench_function("exponent check e=60 m=3", |b| b.iter(|| exponent_check(3, black_box(60)).unwrap()));
}

criterion_group!(benches, constants);
criterion_main!(benches);
