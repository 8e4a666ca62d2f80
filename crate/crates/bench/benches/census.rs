use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use heightcount::census::{count_imaginary_quadratic, count_quadratic_points_p1, count_rational, Schedule};
use heightcount::nfq::Field;
use num_rational::BigRational;

fn x(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn counts(c: &mut Criterion) {
    let s = Schedule::default();
    let qi = Field::parse("Q(i)").unwrap();
    c.bench_function("count_rational n=2 X=200", |b| {
        b.iter(|| count_rational(2, black_box(&x(200)), &s).unwrap())
    });
    c.bench_function("count_imaginary_quadratic Q(i) n=1 X=10", |b| {
        b.iter(|| count_imaginary_quadratic(&qi, 1, black_box(&x(10)), &s).unwrap())
    });
    let mut g = c.benchmark_group("quadratic p1");
    g.sample_size(10);
    g.bench_function("X=4", |b| b.iter(|| count_quadratic_points_p1(black_box(&x(4)), &s).unwrap()));
    g.finish();
}

criterion_group!(benches, counts);
criterion_main!(benches);
