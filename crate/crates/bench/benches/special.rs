use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hostler_core::bigfloat::{with_digits, BigFloat};
use hostler_core::scalar::from_c64;
use hostler_core::special::kummer::{hyp1f1, hyperu};
use hostler_core::special::whittaker::{whittaker_m, whittaker_w, WhittakerOrder};
use num_complex::Complex;

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

fn kummer(cr: &mut Criterion) {
    cr.bench_function("hyp1f1 real", |b| {
        b.iter(|| hyp1f1(black_box(&c(0.7, 0.0)), black_box(&c(2.3, 0.0)), black_box(&c(4.5, 0.0))))
    });
    cr.bench_function("hyp1f1 complex", |b| {
        b.iter(|| hyp1f1(black_box(&c(0.7, 0.4)), black_box(&c(2.3, 0.0)), black_box(&c(-6.0, 2.0))))
    });
    cr.bench_function("hyperu integer b", |b| {
        b.iter(|| hyperu(black_box(&c(0.3, 0.0)), black_box(&c(3.0, 0.0)), black_box(&2.5)))
    });
    cr.bench_function("hyperu large z", |b| {
        b.iter(|| hyperu(black_box(&c(0.3, 0.0)), black_box(&c(2.6, 0.0)), black_box(&40.0)))
    });
    cr.bench_function("hyp1f1 60 digits", |b| {
        b.iter(|| {
            with_digits(60, || {
                let a: Complex<BigFloat> = from_c64(c(0.7, 0.0));
                let bb: Complex<BigFloat> = from_c64(c(2.3, 0.0));
                let z: Complex<BigFloat> = from_c64(c(4.5, 0.0));
                hyp1f1(&a, &bb, &z).map(|v| v.condition)
            })
        })
    });
}

fn whittaker(cr: &mut Criterion) {
    let o = WhittakerOrder::new(c(-0.7, 0.0), c(3.5, 0.0));
    cr.bench_function("whittaker_m", |b| b.iter(|| whittaker_m(o, black_box(1.7), false)));
    cr.bench_function("whittaker_w", |b| b.iter(|| whittaker_w(o, black_box(1.7), false)));
    cr.bench_function("whittaker_w deriv", |b| b.iter(|| whittaker_w(o, black_box(1.7), true)));
}

criterion_group!(benches, kummer, whittaker);
criterion_main!(benches);
