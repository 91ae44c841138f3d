//! Benchmarks for the expansion recursions, the series products, and the
//! matrix model.
//!
//! The grafting and product structure constants are memoized process-wide,
//! so the first iteration pays for kernel construction and later iterations
//! measure the series assembly itself. That matches how the library is used:
//! long-running sessions touch the same low-degree kernels over and over.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use postlie::bch::bch_table;
use postlie::hopf::{exp_concat, gl_product, log_gl};
use postlie::lift::bch_recursion;
use postlie::magnus::{inverse_postlie_magnus, postlie_magnus};
use postlie::matrix::{RatMatrix, TriangularModel};
use postlie::{Rational, Series};
use postlie_bench::dense_series;
use std::hint::black_box;

fn bench_magnus(c: &mut Criterion) {
    let mut group = c.benchmark_group("magnus");
    for order in [4usize, 5, 6] {
        group.bench_with_input(BenchmarkId::new("direct", order), &order, |b, &order| {
            b.iter(|| postlie_magnus(black_box(order)))
        });
        group.bench_with_input(BenchmarkId::new("inverse", order), &order, |b, &order| {
            b.iter(|| inverse_postlie_magnus(black_box(order)))
        });
    }
    group.finish();
}

fn bench_weighted_recursion(c: &mut Criterion) {
    let mut group = c.benchmark_group("weighted recursion");
    group.sample_size(20);
    for order in [4usize, 5, 6] {
        group.bench_with_input(BenchmarkId::from_parameter(order), &order, |b, &order| {
            b.iter(|| bch_recursion(black_box(order), false).unwrap())
        });
    }
    group.finish();
}

fn bench_products(c: &mut Criterion) {
    let mut group = c.benchmark_group("series products");
    for order in [4usize, 5, 6] {
        let x = dense_series(order);
        let y = dense_series(order);
        group.bench_with_input(
            BenchmarkId::new("grossman-larson", order),
            &order,
            |b, _| b.iter(|| gl_product(black_box(&x), black_box(&y))),
        );
        group.bench_with_input(BenchmarkId::new("concat", order), &order, |b, _| {
            b.iter(|| black_box(&x).concat_mul(black_box(&y)))
        });
    }
    group.finish();
}

fn bench_exp_log(c: &mut Criterion) {
    let mut group = c.benchmark_group("exp and log");
    group.sample_size(20);
    for order in [5usize, 6, 7] {
        group.bench_with_input(BenchmarkId::from_parameter(order), &order, |b, &order| {
            let gen = Series::<Rational>::generator(order);
            b.iter(|| log_gl(&exp_concat(black_box(&gen)).unwrap()).unwrap())
        });
    }
    group.finish();
}

fn bench_bch_table(c: &mut Criterion) {
    let mut group = c.benchmark_group("bch table");
    group.sample_size(10);
    for order in [4usize, 5, 6] {
        group.bench_with_input(BenchmarkId::from_parameter(order), &order, |b, &order| {
            b.iter(|| bch_table(black_box(order)))
        });
    }
    group.finish();
}

fn bench_matrix_model(c: &mut Criterion) {
    let mut group = c.benchmark_group("matrix model");
    group.sample_size(10);
    let model = TriangularModel::new(4);
    let mut x = RatMatrix::zero(4);
    for i in 0..4 {
        for j in 0..4 {
            x.set_entry(i, j, postlie::coeff::rat((i + 2 * j) as i64 % 3 - 1, 1));
        }
    }
    group.bench_function("star factorization order 6", |b| {
        b.iter(|| model.verify_et9(black_box(&x), 6).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_magnus,
    bench_weighted_recursion,
    bench_products,
    bench_exp_log,
    bench_bch_table,
    bench_matrix_model
);
criterion_main!(benches);
