use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use std::hint::black_box;
use tripod_core::beams::BeamSpec;
use tripod_core::medium::{rabi_from_envelope, AtomicParams};
use tripod_core::propagation::{default_gradient_step, deflection_angles};
use tripod_core::response::susceptibility_at;
use tripod_core::steadystate::steady_state;
use tripod_core::VaporCell;

fn bench_steady_state(c: &mut Criterion) {
    let p = AtomicParams::default();
    let rabi = rabi_from_envelope(Complex64::new(0.3, 0.0), 0.5, &p);
    c.bench_function("steady_state", |b| b.iter(|| steady_state(black_box(&p), black_box(&rabi)).unwrap()));
}

fn bench_point(c: &mut Criterion) {
    let p = AtomicParams::default();
    let beam = BeamSpec::gaussian(0.1414, 0.5);
    c.bench_function("susceptibility_at", |b| {
        b.iter(|| susceptibility_at(black_box(0.05), 0.0, black_box(0.2), &beam, &p).unwrap())
    });
}

fn bench_profile(c: &mut Criterion) {
    let beam = BeamSpec::gaussian(0.1414, std::f64::consts::FRAC_PI_4);
    let h = default_gradient_step(&beam);
    let cell = VaporCell::new(beam, AtomicParams::default());
    let mut g = c.benchmark_group("profile");
    g.sample_size(10);
    g.bench_function("deflection_500", |b| b.iter(|| deflection_angles(&cell, 0.0707, 1.5, 500, h).unwrap()));
    g.finish();
}

criterion_group!(benches, bench_steady_state, bench_point, bench_profile);
criterion_main!(benches);
