use criterion::{criterion_group, criterion_main, Criterion};
use efunc_bench::*;
use efunc_core::efn::er_coefficients;
use efunc_core::frobenius::frobenius_basis;
use efunc_core::geometry::{certify, critical_value_polynomial};
use efunc_core::laplace::laplace_r;
use std::hint::black_box;

fn quartic(c: &mut Criterion) {
    let f = headline_quartic();
    c.bench_function("critical_cubic", |b| b.iter(|| critical_value_polynomial(black_box(&f))));
    c.bench_function("certify_256", |b| b.iter(|| certify(black_box(&f), 256, None).unwrap()));
    c.bench_function("er_coefficients_50", |b| b.iter(|| er_coefficients(black_box(&f), 0, 50).unwrap()));
}

fn operators(c: &mut Criterion) {
    let (x, y) = operator_pair();
    c.bench_function("weyl_multiply", |b| b.iter(|| black_box(&x) * black_box(&y)));
    let params = resonant_params();
    c.bench_function("frobenius_basis_40", |b| b.iter(|| frobenius_basis(black_box(&params), 40).unwrap()));
    let h = laplace_input();
    c.bench_function("laplace_r", |b| b.iter(|| laplace_r(black_box(&h)).unwrap()));
}

criterion_group!(benches, quartic, operators);
criterion_main!(benches);
