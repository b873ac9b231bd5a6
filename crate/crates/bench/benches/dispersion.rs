use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use polrot::dispersion::{faraday_modes, propagation_modes};
use polrot::{SusceptibilityTensor, C64};

fn dispersion(c: &mut Criterion) {
    let w = 3.767e15;
    let general = SusceptibilityTensor::hermitian(
        [0.1, -0.2, 0.3],
        C64::new(0.05, 0.2),
        C64::new(-0.1, 0.02),
        C64::new(0.03, -0.07),
    );
    c.bench_function("propagation_modes/hermitian", |b| {
        b.iter(|| propagation_modes(black_box(&general), w).unwrap())
    });
    let faraday =
        SusceptibilityTensor::faraday(C64::new(0.0, 0.0), C64::new(0.0, 0.08), C64::new(0.0, 0.0));
    c.bench_function("propagation_modes/faraday", |b| {
        b.iter(|| propagation_modes(black_box(&faraday), w).unwrap())
    });
    c.bench_function("faraday_modes", |b| {
        b.iter(|| {
            faraday_modes(
                black_box(C64::new(0.0, 0.0)),
                black_box(C64::new(0.0, 0.08)),
                w,
            )
            .unwrap()
        })
    });
}

criterion_group!(benches, dispersion);
criterion_main!(benches);
