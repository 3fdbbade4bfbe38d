use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hostler_bench::GEOMETRIES;
use hostler_core::green::{hostler_green, partial_wave_green, CoulombParams, SphericalPoint};
use hostler_core::identities::{
    geometry_from, large_order_stress, verify_w_downward_sum, verify_whittaker_addition, VerifyOptions,
};
use num_complex::Complex;

fn addition(cr: &mut Criterion) {
    let opts = VerifyOptions {
        auto_escalate: false,
        ..Default::default()
    };
    for (i, &(r0, r, gamma)) in GEOMETRIES.iter().enumerate() {
        let geo = geometry_from(r, r0, gamma);
        cr.bench_function(&format!("whittaker addition geometry {i}"), |b| {
            b.iter(|| verify_whittaker_addition(black_box(Complex::new(0.3, 0.4)), &geo, &opts))
        });
    }
    let opts = VerifyOptions::default();
    cr.bench_function("w downward sum n=10", |b| {
        b.iter(|| verify_w_downward_sum(10, Complex::new(-1.2, 0.0), Complex::new(2.5, 0.0), black_box(3.0), &opts))
    });
}

fn green(cr: &mut Criterion) {
    let params = CoulombParams::new(1.3, 0.9).unwrap();
    let p = SphericalPoint::new(2.0, 0.7, 0.3).unwrap();
    let p0 = SphericalPoint::new(0.8, 1.9, 2.4).unwrap();
    let opts = VerifyOptions::default();
    cr.bench_function("hostler closed form", |b| b.iter(|| hostler_green(params, black_box(p), p0)));
    cr.bench_function("partial-wave series", |b| b.iter(|| partial_wave_green(params, black_box(p), p0, &opts)));
}

fn stress(cr: &mut Criterion) {
    let mut g = cr.benchmark_group("large order");
    g.sample_size(10);
    g.bench_function("mu = 20 at 60 digits", |b| b.iter(|| large_order_stress(black_box(60))));
    g.finish();
}

criterion_group!(benches, addition, green, stress);
criterion_main!(benches);
